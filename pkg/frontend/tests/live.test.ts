/**
 * Same scripted flow as app.test.ts but against a live API server.
 * Opt-in: set VECUQ_API (e.g. http://127.0.0.1:8643) with a served
 * dataset named "mini" (5x4x1, nt=3, 8 members, seed 3) and run vitest.
 */
import { describe, expect, it } from 'vitest';
import { boot } from '../src/app';

const API = process.env.VECUQ_API;

describe.skipIf(!API)('explorer against a live server', () => {
  it('drives the linked views end to end', async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const root = document.getElementById('app')!;
    const app = await boot(root, '', {
      apiBase: API,
      fetchImpl: (input, init) => fetch(input, init),
    });
    expect(app.global.glyphCount()).toBe(20);
    expect(app.local.glyphCount()).toBe(20);

    app.store.update({ region: { lo: [1, 1, 0], hi: [3, 2, 0] } });
    await app.idle;
    expect(app.local.glyphCount()).toBe(6);
    expect(document.querySelectorAll('.dh-cell').length).toBe(48);

    (document.querySelector('.mv-t[data-t="1"]') as SVGElement).dispatchEvent(
      new MouseEvent('click'),
    );
    await app.idle;
    expect(app.store.state.t).toBe(1);

    (
      document.querySelector('.dh-cell[data-i="2"][data-j="1"][data-member="0"]') as SVGElement
    ).dispatchEvent(new MouseEvent('click'));
    await app.idle;
    expect(document.querySelectorAll('#point-detail .pd-member').length).toBe(8);

    const outlierInput = document.getElementById('outlier-k') as HTMLInputElement;
    outlierInput.value = '1';
    outlierInput.dispatchEvent(new Event('change'));
    await app.idle;
    const pair = app.depth.squidPairTriangles();
    expect(pair.full).toBeGreaterThan(0);
    expect(pair.retained).toBeGreaterThan(0);
  });
});
