/** Display formatting helpers (pure). */

const UNITS = ["B/s", "kB/s", "MB/s", "GB/s"];

export function formatByteRate(bytesPerSecond: number): string {
  let value = bytesPerSecond;
  let unit = 0;
  while (value >= 1000 && unit < UNITS.length - 1) {
    value /= 1000;
    unit += 1;
  }
  const digits = value >= 100 || unit === 0 ? 0 : 1;
  return `${value.toFixed(digits)} ${UNITS[unit]}`;
}

export function formatLatency(ms: number | null): string {
  if (ms === null) return "–";
  return `${ms.toFixed(2)} ms`;
}

export function formatPercent(fraction: number): string {
  return `${(fraction * 100).toFixed(0)}%`;
}

export function formatClock(iso: string): string {
  const idx = iso.indexOf("T");
  return idx >= 0 ? iso.slice(idx + 1, idx + 9) : iso;
}

/**
 * Downsample a series for display. Lossless for up to `limit` points
 * (returns the input untouched); beyond that keeps every k-th point plus
 * the last one.
 */
export function decimate<T>(points: T[], limit = 1000): T[] {
  if (points.length <= limit) return points;
  const stride = Math.ceil(points.length / limit);
  const out: T[] = [];
  for (let i = 0; i < points.length; i += stride) out.push(points[i] as T);
  const last = points[points.length - 1] as T;
  if (out[out.length - 1] !== last) out.push(last);
  return out;
}
