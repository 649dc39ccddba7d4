import { describe, expect, it } from 'vitest';
import { ApiClient, ApiError, isAbort } from '../src/api';
import { makeFixtureFetch } from './fixtures';

describe('api client', () => {
  it('fetches and parses datasets', async () => {
    const api = new ApiClient('', makeFixtureFetch());
    const datasets = await api.datasets();
    expect(datasets).toHaveLength(1);
    expect(datasets[0].dims).toEqual([5, 4, 1]);
  });

  it('raises ApiError with the server code on error bodies', async () => {
    const api = new ApiClient('', makeFixtureFetch());
    await expect(api.depth('x', 'mini', 99)).rejects.toSatisfy(
      (err: unknown) => err instanceof ApiError && err.code === 'no_fixture',
    );
  });

  it('aborts the in-flight request when the slot is reused', async () => {
    let firstSignal: AbortSignal | undefined;
    let calls = 0;
    const hangingFetch: typeof fetch = (_input, init) => {
      calls += 1;
      if (calls === 1) {
        firstSignal = init?.signal ?? undefined;
        return new Promise<Response>((_resolve, reject) => {
          init?.signal?.addEventListener('abort', () =>
            reject(new DOMException('aborted', 'AbortError')),
          );
        });
      }
      return Promise.resolve(
        new Response(JSON.stringify({ dataset: 'mini', series: [0] }), { status: 200 }),
      );
    };
    const api = new ApiClient('', hangingFetch);
    const first = api.magvar('mini');
    const second = api.magvar('mini');
    await expect(first).rejects.toSatisfy(isAbort);
    await expect(second).resolves.toMatchObject({ series: [0] });
    expect(firstSignal?.aborted).toBe(true);
  });

  it('uses independent slots for independent views', async () => {
    const seen: string[] = [];
    const okFetch: typeof fetch = (input) => {
      seen.push(String(input));
      return Promise.resolve(new Response('{}', { status: 200 }));
    };
    const api = new ApiClient('', okFetch);
    await Promise.all([
      api.depth('heatmap', 'mini', 0),
      api.glyphs('global', 'mini', {
        t: 0, type: 'squid', exponent: 2.5, segments: 24, scale: 1,
      }),
    ]);
    expect(seen).toHaveLength(2);
  });
});
