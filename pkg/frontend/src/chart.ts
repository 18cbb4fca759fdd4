import { Distribution } from "./types";

export interface ChartLayout {
  width: number;
  height: number;
  marginLeft: number;
  marginBottom: number;
  marginTop: number;
  marginRight: number;
}

export const DEFAULT_LAYOUT: ChartLayout = {
  width: 420,
  height: 220,
  marginLeft: 42,
  marginBottom: 24,
  marginTop: 8,
  marginRight: 8,
};

export interface Point {
  x: number;
  y: number;
}

export interface ChartModel {
  points: Point[]; // sorted distances, one point per rank
  fitSegments: [Point, Point][]; // two fitted lines clipped to their ranks
  splitMarker: Point; // the committed threshold position
  yMax: number;
}

/** Map a 1-based rank to a horizontal pixel position. */
export function xScale(rank: number, count: number, layout: ChartLayout): number {
  const span = layout.width - layout.marginLeft - layout.marginRight;
  if (count <= 1) return layout.marginLeft + span / 2;
  return layout.marginLeft + ((rank - 1) / (count - 1)) * span;
}

/** Map a distance to a vertical pixel position (origin at top). */
export function yScale(value: number, yMax: number, layout: ChartLayout): number {
  const span = layout.height - layout.marginTop - layout.marginBottom;
  const frac = yMax > 0 ? value / yMax : 0;
  return layout.height - layout.marginBottom - frac * span;
}

/**
 * Build the drawable model for the sorted-distance chart: the distance
 * curve, the two fitted line segments, and the split marker. When a
 * threshold override is active the marker sits at the overridden value's
 * rank instead of the fitted split.
 */
export function buildChartModel(
  dist: Distribution,
  layout: ChartLayout = DEFAULT_LAYOUT,
  overrideMm: number | null = null,
): ChartModel {
  const ds = dist.sorted_distances;
  const count = ds.length;
  const yMax = count > 0 ? Math.max(ds[count - 1], dist.tau, overrideMm ?? 0) : 1;

  const points = ds.map((d, i) => ({
    x: xScale(i + 1, count, layout),
    y: yScale(d, yMax, layout),
  }));

  const fitSegments: [Point, Point][] = [];
  const ranges: [number, number][] = [
    [1, dist.split_index],
    [dist.split_index + 1, count],
  ];
  for (let seg = 0; seg < 2; seg++) {
    const [slope, intercept] = dist.fit_lines[seg];
    const [lo, hi] = ranges[seg];
    fitSegments.push([
      { x: xScale(lo, count, layout), y: yScale(slope * lo + intercept, yMax, layout) },
      { x: xScale(hi, count, layout), y: yScale(slope * hi + intercept, yMax, layout) },
    ]);
  }

  const markerValue = overrideMm ?? dist.tau;
  const markerRank = overrideMm === null ? dist.split_index : rankFor(overrideMm, ds);
  const splitMarker = {
    x: xScale(Math.max(markerRank, 1), count, layout),
    y: yScale(markerValue, yMax, layout),
  };
  return { points, fitSegments, splitMarker, yMax };
}

/** 1-based rank of the last sorted distance strictly below the value. */
export function rankFor(value: number, sorted: number[]): number {
  let rank = 0;
  for (const d of sorted) {
    if (d < value) rank++;
    else break;
  }
  return rank;
}

/**
 * Snap a requested threshold to the nearest sorted distance so the
 * committed value always corresponds to a realizable cut.
 */
export function snapThreshold(value: number, sorted: number[]): number {
  if (sorted.length === 0) return value;
  let best = sorted[0];
  for (const d of sorted) {
    if (Math.abs(d - value) < Math.abs(best - value)) best = d;
  }
  return best;
}
