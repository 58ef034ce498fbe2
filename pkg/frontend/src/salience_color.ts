/** Color encoding for the pattern-overview squares. Pure presentation: maps
 * the server's display score (0–100, 50 = no stronger than context) onto a
 * cool-to-hot ramp. The score itself is always shown verbatim next to it. */

export function salienceColor(display: number): string {
  const t = Math.max(0, Math.min(1, (display - 40) / 40));
  const hue = 210 - 190 * t; // steel blue → orange-red
  const saturation = 35 + 55 * t;
  const lightness = 72 - 22 * t;
  return `hsl(${Math.round(hue)}, ${Math.round(saturation)}%, ${Math.round(lightness)}%)`;
}

/** Verdict wording for the assessment panel (presentation only). */
export function salienceVerdict(display: number): string {
  if (display < 50) return "blends into its context";
  if (display < 60) return "weakly separated from its context";
  return "stands out from its context";
}
