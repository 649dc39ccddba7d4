import type {
  DatasetInfo,
  DepthMatrixDoc,
  GlyphKind,
  GlyphSceneDoc,
  MagvarDoc,
  PointDoc,
  Region,
} from './types';
import { regionParam } from './types';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === 'AbortError';
}

export interface GlyphQuery {
  t: number;
  type: GlyphKind;
  region?: Region | null;
  exponent: number;
  segments: number;
  scale: number;
}

/**
 * Fetch wrapper with named cancellation slots: issuing a request on a slot
 * aborts the one still in flight there, so stale responses never render.
 */
export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(
    private base = '',
    private fetchImpl: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async get<T>(slot: string, url: string): Promise<T> {
    this.controllers.get(slot)?.abort();
    const ctl = new AbortController();
    this.controllers.set(slot, ctl);
    const res = await this.fetchImpl(this.base + url, { signal: ctl.signal });
    if (!res.ok) {
      let code = 'http_error';
      let message = `${res.status}`;
      try {
        const body = (await res.json()) as { code?: string; message?: string };
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(res.status, code, message);
    }
    return (await res.json()) as T;
  }

  datasets(): Promise<DatasetInfo[]> {
    return this.get('datasets', '/api/datasets');
  }

  glyphs(slot: string, id: string, q: GlyphQuery): Promise<GlyphSceneDoc> {
    const params = new URLSearchParams({
      t: String(q.t),
      type: q.type,
      exponent: String(q.exponent),
      segments: String(q.segments),
      scale: String(q.scale),
    });
    if (q.region) params.set('region', regionParam(q.region));
    return this.get(slot, `/api/datasets/${id}/glyphs?${params.toString()}`);
  }

  depth(slot: string, id: string, t: number, region?: Region | null): Promise<DepthMatrixDoc> {
    const params = new URLSearchParams({ t: String(t) });
    if (region) params.set('region', regionParam(region));
    return this.get(slot, `/api/datasets/${id}/depth?${params.toString()}`);
  }

  point(
    id: string,
    t: number,
    p: [number, number, number],
    outliers: number,
  ): Promise<PointDoc> {
    const params = new URLSearchParams({
      t: String(t),
      i: String(p[0]),
      j: String(p[1]),
      k: String(p[2]),
      outliers: String(outliers),
    });
    return this.get('point', `/api/datasets/${id}/point?${params.toString()}`);
  }

  magvar(id: string, t?: number): Promise<MagvarDoc> {
    const params = new URLSearchParams();
    if (t !== undefined) params.set('t', String(t));
    const qs = params.toString();
    return this.get('magvar', `/api/datasets/${id}/magvar${qs ? '?' + qs : ''}`);
  }
}
