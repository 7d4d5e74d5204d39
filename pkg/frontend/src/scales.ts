// Presentation scales: monotone mappings from served numbers to pixels
// and colors. No analysis happens here; inputs are map JSON values.

export const CLUSTER_PALETTE = [
  "#d62728", "#2ca02c", "#1f77b4", "#e7ba2f", "#9467bd",
  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#ff7f0e",
];

export function clusterColor(cluster: number): string {
  return CLUSTER_PALETTE[(cluster - 1) % CLUSTER_PALETTE.length];
}

/** Node radius in pixels, strictly monotone in the occurrence weight. */
export function nodeRadius(
  occurrences: number,
  minOcc: number,
  maxOcc: number,
  minRadius = 4,
  maxRadius = 18,
): number {
  if (maxOcc <= minOcc) return (minRadius + maxRadius) / 2;
  const t = (Math.sqrt(occurrences) - Math.sqrt(minOcc)) /
    (Math.sqrt(maxOcc) - Math.sqrt(minOcc));
  return minRadius + t * (maxRadius - minRadius);
}

/** Edge width in pixels, strictly monotone in the link strength. */
export function edgeWidth(
  strength: number,
  minStrength: number,
  maxStrength: number,
  minWidth = 0.5,
  maxWidth = 4,
): number {
  if (maxStrength <= minStrength) return (minWidth + maxWidth) / 2;
  const t = (strength - minStrength) / (maxStrength - minStrength);
  return minWidth + t * (maxWidth - minWidth);
}

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

/** Overlay color: blue (old) through green to yellow (recent), using the
 * server-provided clamp bounds. */
export function scoreColor(score: number, low: number, high: number): string {
  const span = high - low;
  const t = span > 0 ? Math.min(Math.max((score - low) / span, 0), 1) : 0.5;
  const stops: Array<[number, number, number]> = [
    [33, 102, 172],
    [103, 169, 97],
    [253, 231, 37],
  ];
  const scaled = t * (stops.length - 1);
  const idx = Math.min(Math.floor(scaled), stops.length - 2);
  const frac = scaled - idx;
  const [r0, g0, b0] = stops[idx];
  const [r1, g1, b1] = stops[idx + 1];
  const r = Math.round(lerp(r0, r1, frac));
  const g = Math.round(lerp(g0, g1, frac));
  const b = Math.round(lerp(b0, b1, frac));
  return `rgb(${r},${g},${b})`;
}

export const MUTED_COLOR = "#c8c8c8";

/** Heat ramp for the density view. */
export function densityColor(value: number, peak: number): string {
  const t = peak > 0 ? Math.min(value / peak, 1) : 0;
  const r = Math.round(lerp(15, 252, t));
  const g = Math.round(lerp(35, 141, t));
  const b = Math.round(lerp(90, 60, t));
  return `rgb(${r},${g},${b})`;
}
