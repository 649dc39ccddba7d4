import fs from 'node:fs';
import path from 'node:path';
import { fileURLToPath } from 'node:url';

const FIXTURE_DIR = path.join(path.dirname(fileURLToPath(import.meta.url)), 'fixtures');

/** Same key scheme as record_fixtures.py: sorted params, non-alnum -> '_'. */
export function fixtureName(pathname: string, params: URLSearchParams): string {
  const entries = [...params.entries()].sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
  let key = pathname;
  if (entries.length) key += '?' + entries.map(([k, v]) => `${k}=${v}`).join('&');
  return key.replace(/[^A-Za-z0-9]+/g, '_').replace(/^_+|_+$/g, '') + '.json';
}

export interface FetchLogEntry {
  pathname: string;
  params: Record<string, string>;
}

/** fetch stub resolving from recorded real API responses. */
export function makeFixtureFetch(log: FetchLogEntry[] = []): typeof fetch {
  return async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = new URL(String(input), 'http://fixtures.test');
    if (init?.signal?.aborted) {
      throw new DOMException('aborted', 'AbortError');
    }
    log.push({
      pathname: url.pathname,
      params: Object.fromEntries(url.searchParams.entries()),
    });
    const file = path.join(FIXTURE_DIR, fixtureName(url.pathname, url.searchParams));
    if (!fs.existsSync(file)) {
      return new Response(
        JSON.stringify({ status: 404, code: 'no_fixture', message: file }),
        { status: 404, headers: { 'content-type': 'application/json' } },
      );
    }
    return new Response(fs.readFileSync(file), {
      status: 200,
      headers: { 'content-type': 'application/json' },
    });
  };
}

export function loadFixture<T>(pathname: string, params: Record<string, string>): T {
  const file = path.join(FIXTURE_DIR, fixtureName(pathname, new URLSearchParams(params)));
  return JSON.parse(fs.readFileSync(file, 'utf-8')) as T;
}
