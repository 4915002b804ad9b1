/**
 * Wheel zoom to hierarchy level.
 *
 * The zoom range is divided evenly among the levels: fully zoomed out shows
 * the coarsest communities (level max_level), fully zoomed in the finest
 * (level 0). The mapping is monotone non-increasing in the zoom factor and
 * clamped at both ends.
 */

export const ZOOM_MIN = 1;
export const ZOOM_MAX = 8;

export function clampZoom(zoomFactor: number): number {
  return Math.min(Math.max(zoomFactor, ZOOM_MIN), ZOOM_MAX);
}

export function zoomToLevel(zoomFactor: number, maxLevel: number): number {
  if (maxLevel <= 0) return 0;
  const share = (clampZoom(zoomFactor) - ZOOM_MIN) / (ZOOM_MAX - ZOOM_MIN);
  const bucket = Math.min(Math.floor(share * (maxLevel + 1)), maxLevel);
  return maxLevel - bucket;
}
