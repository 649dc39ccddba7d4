/** Wire-format types of the HTTP JSON API (single source of truth). */

export interface DatasetInfo {
  id: string;
  name: string;
  dims: [number, number, number];
  nt: number;
  n_members: number;
  spacing: [number, number, number];
  origin: [number, number, number];
}

export interface DegenerateFlags {
  zero_median: boolean;
  zero_spread: boolean;
  clipped_members: number;
}

export interface SummaryRecord {
  location?: number[];
  median_index: number;
  median_dir: number[];
  h: number;
  delta_h: number;
  alpha0: number;
  sigma0: number[];
  sigma1: number[];
  r0: number;
  r1: number;
  alpha1: number;
  degenerate: DegenerateFlags;
}

export interface GlyphEntry {
  location: number[];
  summary: SummaryRecord;
  skipped?: boolean;
  transform?: { origin: number[]; axes: number[][] };
  positions?: number[];
  normals?: number[];
  indices?: number[];
  part_ids?: number[];
}

export interface GlyphSceneDoc {
  dataset: string;
  t: number;
  glyph_type: string;
  exponent: number;
  segments: number;
  scale: number;
  glyphs: GlyphEntry[];
}

export interface DepthMatrixDoc {
  dataset: string;
  t: number;
  locations: number[][];
  members: number[];
  depth: number[][];
  counts: number[][];
}

export interface PointDetailEntry {
  member_index: number;
  magnitude: number;
  angle_to_median: number;
  depth: number;
  is_outlier_candidate: boolean;
}

export interface PointDoc {
  dataset: string;
  t: number;
  location: number[];
  outliers: number;
  details: PointDetailEntry[];
  summary_full: SummaryRecord;
  summary_retained: SummaryRecord;
}

export interface MagvarDoc {
  dataset: string;
  series: number[];
  t?: number;
  slice?: number[];
  locations?: number[][];
}

export type GlyphKind = 'squid' | 'cone' | 'comet' | 'tailed-disc';

export interface Region {
  lo: [number, number, number];
  hi: [number, number, number];
}

export function regionParam(r: Region): string {
  return `${r.lo[0]}:${r.hi[0]},${r.lo[1]}:${r.hi[1]},${r.lo[2]}:${r.hi[2]}`;
}

export function parseRegionParam(text: string): Region | null {
  const parts = text.split(',');
  if (parts.length !== 3) return null;
  const lo: number[] = [];
  const hi: number[] = [];
  for (const part of parts) {
    const m = part.split(':');
    if (m.length !== 2) return null;
    const a = Number(m[0]);
    const b = Number(m[1]);
    if (!Number.isInteger(a) || !Number.isInteger(b) || a > b) return null;
    lo.push(a);
    hi.push(b);
  }
  return { lo: lo as Region['lo'], hi: hi as Region['hi'] };
}

export function regionSize(r: Region): number {
  return (r.hi[0] - r.lo[0] + 1) * (r.hi[1] - r.lo[1] + 1) * (r.hi[2] - r.lo[2] + 1);
}

export function regionContains(r: Region, p: [number, number, number]): boolean {
  return p.every((c, ax) => c >= r.lo[ax] && c <= r.hi[ax]);
}
