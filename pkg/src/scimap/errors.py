"""Exception hierarchy shared across the toolkit.

Data-shaped problems (bad input files, degenerate networks) raise
subclasses of :class:`ScimapError` so the CLI can map them to exit
code 1 with a one-line message; genuine usage errors are left to
argparse (exit code 2).
"""


class ScimapError(Exception):
    """Base class for all toolkit errors."""


class MissingColumn(ScimapError):
    """A required schema role has no matching CSV header."""

    def __init__(self, role: str, column: str):
        self.role = role
        self.column = column
        super().__init__(f"missing column {column!r} for role {role!r}")


class MalformedRow(ScimapError):
    """A CSV data row could not be parsed (unbalanced quoting etc.)."""

    def __init__(self, row_number: int, reason: str):
        self.row_number = row_number
        self.reason = reason
        super().__init__(f"malformed row {row_number}: {reason}")


class CyclicMerge(ScimapError):
    """The merge rules contain a cycle."""


class DuplicateRuleForLabel(ScimapError):
    """More than one thesaurus rule targets the same label."""


class UnknownAction(ScimapError):
    """A thesaurus rule names an action that does not exist."""


class MalformedRule(ScimapError):
    """A thesaurus line is structurally invalid (e.g. merge without target)."""


class EmptyNetwork(ScimapError):
    """No node passes the occurrence threshold."""


class DegenerateNetwork(ScimapError):
    """The network has zero total edge weight or an isolated node."""


class DegenerateSimilarity(ScimapError):
    """All similarities are zero; a layout cannot be computed."""


class TooFewNodes(ScimapError):
    """An operation needs at least two nodes."""


class NoDatedRecords(ScimapError):
    """None of a node's supporting records carries a publication year."""


class SchemaMismatch(ScimapError):
    """A map file header does not match the expected schema."""
