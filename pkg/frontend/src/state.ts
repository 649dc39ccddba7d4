import type { GlyphKind, Region } from './types';
import { parseRegionParam, regionParam } from './types';

export interface ViewState {
  dataset: string | null;
  t: number;
  glyphType: GlyphKind;
  region: Region | null;
  picked: [number, number, number] | null;
  outlierK: number;
  exponent: number;
  segments: number;
  userScale: number;
  overlay: boolean;
}

export const DEFAULT_STATE: ViewState = {
  dataset: null,
  t: 0,
  glyphType: 'squid',
  region: null,
  picked: null,
  outlierK: 0,
  exponent: 2.5,
  segments: 24,
  userScale: 1,
  overlay: false,
};

export type StateKey = keyof ViewState;
export type Listener = (changed: Set<StateKey>, state: ViewState) => void;

/** Minimal store: one synchronous notification per update batch. */
export class Store {
  state: ViewState;
  private listeners: Listener[] = [];

  constructor(initial?: Partial<ViewState>) {
    this.state = { ...DEFAULT_STATE, ...initial };
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  update(patch: Partial<ViewState>): void {
    const changed = new Set<StateKey>();
    for (const key of Object.keys(patch) as StateKey[]) {
      const next = patch[key];
      if (JSON.stringify(next) !== JSON.stringify(this.state[key])) {
        Object.assign(this.state, { [key]: next });
        changed.add(key);
      }
    }
    if (changed.size === 0) return;
    for (const fn of [...this.listeners]) fn(changed, this.state);
  }
}

const GLYPH_KINDS: GlyphKind[] = ['squid', 'cone', 'comet', 'tailed-disc'];

/** Serialize the view state into a URL query so reloads restore the view. */
export function toQuery(s: ViewState): string {
  const params = new URLSearchParams();
  if (s.dataset) params.set('ds', s.dataset);
  params.set('t', String(s.t));
  params.set('type', s.glyphType);
  if (s.region) params.set('region', regionParam(s.region));
  if (s.picked) params.set('pick', s.picked.join(','));
  if (s.outlierK > 0) params.set('k', String(s.outlierK));
  if (s.exponent !== DEFAULT_STATE.exponent) params.set('exp', String(s.exponent));
  if (s.segments !== DEFAULT_STATE.segments) params.set('seg', String(s.segments));
  if (s.userScale !== DEFAULT_STATE.userScale) params.set('scale', String(s.userScale));
  if (s.overlay) params.set('overlay', '1');
  return params.toString();
}

export function fromQuery(query: string): ViewState {
  const params = new URLSearchParams(query.startsWith('?') ? query.slice(1) : query);
  const state: ViewState = { ...DEFAULT_STATE };
  state.dataset = params.get('ds');
  const t = Number(params.get('t'));
  if (Number.isInteger(t) && t >= 0) state.t = t;
  const kind = params.get('type') as GlyphKind | null;
  if (kind && GLYPH_KINDS.includes(kind)) state.glyphType = kind;
  const region = params.get('region');
  if (region) state.region = parseRegionParam(region);
  const pick = params.get('pick');
  if (pick) {
    const parts = pick.split(',').map(Number);
    if (parts.length === 3 && parts.every((p) => Number.isInteger(p) && p >= 0)) {
      state.picked = parts as [number, number, number];
    }
  }
  const k = Number(params.get('k'));
  if (Number.isInteger(k) && k > 0) state.outlierK = k;
  const exp = Number(params.get('exp'));
  if (exp > 0) state.exponent = exp;
  const seg = Number(params.get('seg'));
  if (Number.isInteger(seg) && seg >= 8) state.segments = seg;
  const scale = Number(params.get('scale'));
  if (scale > 0) state.userScale = scale;
  state.overlay = params.get('overlay') === '1';
  return state;
}
