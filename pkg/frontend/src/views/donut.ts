import { CATEGORY_COLORS, CATEGORY_ORDER } from "../palette.js";
import type { SummaryCategory } from "../types.js";

export interface DonutSegment {
  category: SummaryCategory;
  fraction: number;
  startAngle: number; // degrees, 0 at 12 o'clock, clockwise
  endAngle: number;
  color: string;
  path: string;
}

function polar(cx: number, cy: number, radius: number, angleDeg: number): [number, number] {
  const rad = ((angleDeg - 90) * Math.PI) / 180;
  return [cx + radius * Math.cos(rad), cy + radius * Math.sin(rad)];
}

/** SVG path for one ring segment between two angles. */
export function arcPath(
  cx: number,
  cy: number,
  outer: number,
  inner: number,
  startAngle: number,
  endAngle: number,
): string {
  const largeArc = endAngle - startAngle > 180 ? 1 : 0;
  const [ox1, oy1] = polar(cx, cy, outer, startAngle);
  const [ox2, oy2] = polar(cx, cy, outer, endAngle);
  const [ix1, iy1] = polar(cx, cy, inner, endAngle);
  const [ix2, iy2] = polar(cx, cy, inner, startAngle);
  return [
    `M ${ox1.toFixed(3)} ${oy1.toFixed(3)}`,
    `A ${outer} ${outer} 0 ${largeArc} 1 ${ox2.toFixed(3)} ${oy2.toFixed(3)}`,
    `L ${ix1.toFixed(3)} ${iy1.toFixed(3)}`,
    `A ${inner} ${inner} 0 ${largeArc} 0 ${ix2.toFixed(3)} ${iy2.toFixed(3)}`,
    "Z",
  ].join(" ");
}

/**
 * Donut segments for a category distribution, in the fixed category order
 * (cognitive stages low to high, then the ChatGPT buckets). Zero-share
 * categories are skipped; arc fractions equal the given proportions.
 */
export function donutSegments(
  distribution: Record<string, number>,
  cx = 40,
  cy = 40,
  outer = 36,
  inner = 20,
): DonutSegment[] {
  const segments: DonutSegment[] = [];
  let angle = 0;
  for (const category of CATEGORY_ORDER) {
    const fraction = distribution[category] ?? 0;
    if (fraction <= 0) continue;
    const sweep = fraction * 360;
    segments.push({
      category,
      fraction,
      startAngle: angle,
      endAngle: angle + sweep,
      color: CATEGORY_COLORS[category],
      path: arcPath(cx, cy, outer, inner, angle, Math.min(angle + sweep, 359.999)),
    });
    angle += sweep;
  }
  return segments;
}

export function donutSvg(distribution: Record<string, number>, size = 80): string {
  const segments = donutSegments(distribution, size / 2, size / 2, size * 0.45, size * 0.25);
  const paths = segments
    .map(
      (s) =>
        `<path d="${s.path}" fill="${s.color}" data-category="${s.category}"><title>${s.category}: ${(s.fraction * 100).toFixed(1)}%</title></path>`,
    )
    .join("");
  return `<svg viewBox="0 0 ${size} ${size}" width="${size}" height="${size}" class="donut">${paths}</svg>`;
}
