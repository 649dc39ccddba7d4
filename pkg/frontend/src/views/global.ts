import * as THREE from 'three';
import type { ApiClient } from '../api';
import { isAbort } from '../api';
import type { Store } from '../state';
import type { DatasetInfo, Region } from '../types';
import { sceneToGroup } from './meshes';
import { Viewport } from './viewport';

const MAP_W = 120;
const MAP_H = 96;

/**
 * Global glyph view: full-extent squid scene plus the region mini-map.
 * Dragging on the mini-map selects an inclusive (i, j) box (k spans the
 * full range) and publishes it as the shared region.
 */
export class GlobalView {
  readonly viewport: Viewport;
  private group: THREE.Group | null = null;
  private info: DatasetInfo | null = null;
  private minimap: SVGSVGElement;
  private boxRect: SVGRectElement;
  private countLabel: HTMLElement;
  private dragStart: [number, number] | null = null;

  constructor(
    container: HTMLElement,
    private store: Store,
    private api: ApiClient,
  ) {
    const panel = document.createElement('div');
    panel.className = 'panel';
    panel.innerHTML = '<h2>Global view (squid glyphs)</h2>';
    const body = document.createElement('div');
    body.className = 'body';
    panel.appendChild(body);
    const legend = document.createElement('div');
    legend.className = 'legend';
    legend.innerHTML = 'glyphs: <span id="global-count">0</span> &middot; drag mini-map to select region';
    panel.appendChild(legend);
    container.appendChild(panel);

    this.viewport = new Viewport(body);
    this.countLabel = legend.querySelector('#global-count') as HTMLElement;

    this.minimap = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
    this.minimap.setAttribute('class', 'minimap');
    this.minimap.setAttribute('id', 'region-minimap');
    this.minimap.setAttribute('width', String(MAP_W));
    this.minimap.setAttribute('height', String(MAP_H));
    this.minimap.setAttribute('viewBox', `0 0 ${MAP_W} ${MAP_H}`);
    const bg = document.createElementNS('http://www.w3.org/2000/svg', 'rect');
    bg.setAttribute('width', String(MAP_W));
    bg.setAttribute('height', String(MAP_H));
    bg.setAttribute('fill', '#eef');
    bg.setAttribute('stroke', '#88a');
    this.minimap.appendChild(bg);
    this.boxRect = document.createElementNS('http://www.w3.org/2000/svg', 'rect');
    this.boxRect.setAttribute('fill', 'none');
    this.boxRect.setAttribute('stroke', '#000');
    this.boxRect.setAttribute('stroke-width', '2');
    this.boxRect.setAttribute('visibility', 'hidden');
    this.minimap.appendChild(this.boxRect);
    body.appendChild(this.minimap);

    this.minimap.addEventListener('mousedown', (ev) => {
      this.dragStart = this.toFraction(ev);
    });
    this.minimap.addEventListener('mousemove', (ev) => {
      if (this.dragStart) this.previewBox(this.dragStart, this.toFraction(ev));
    });
    this.minimap.addEventListener('mouseup', (ev) => {
      if (!this.dragStart || !this.info) return;
      const region = this.fractionsToRegion(this.dragStart, this.toFraction(ev));
      this.dragStart = null;
      this.store.update({ region });
    });
    this.minimap.addEventListener('dblclick', () => {
      this.store.update({ region: null });
      this.boxRect.setAttribute('visibility', 'hidden');
    });
  }

  private toFraction(ev: MouseEvent): [number, number] {
    const rect = this.minimap.getBoundingClientRect();
    const w = rect.width || MAP_W;
    const h = rect.height || MAP_H;
    return [
      Math.min(1, Math.max(0, (ev.clientX - rect.left) / w)),
      Math.min(1, Math.max(0, (ev.clientY - rect.top) / h)),
    ];
  }

  private fractionsToRegion(a: [number, number], b: [number, number]): Region {
    const [nx, ny, nz] = this.info!.dims;
    const cell = (f: number, n: number) => Math.min(n - 1, Math.max(0, Math.floor(f * n)));
    const i0 = cell(Math.min(a[0], b[0]), nx);
    const i1 = cell(Math.max(a[0], b[0]), nx);
    const j0 = cell(Math.min(a[1], b[1]), ny);
    const j1 = cell(Math.max(a[1], b[1]), ny);
    return { lo: [i0, j0, 0], hi: [i1, j1, nz - 1] };
  }

  private previewBox(a: [number, number], b: [number, number]): void {
    const x = Math.min(a[0], b[0]) * MAP_W;
    const y = Math.min(a[1], b[1]) * MAP_H;
    this.boxRect.setAttribute('x', String(x));
    this.boxRect.setAttribute('y', String(y));
    this.boxRect.setAttribute('width', String(Math.abs(a[0] - b[0]) * MAP_W));
    this.boxRect.setAttribute('height', String(Math.abs(a[1] - b[1]) * MAP_H));
    this.boxRect.setAttribute('visibility', 'visible');
  }

  setDataset(info: DatasetInfo): void {
    this.info = info;
  }

  drawRegionBox(region: Region | null): void {
    if (!region || !this.info) {
      this.boxRect.setAttribute('visibility', 'hidden');
      return;
    }
    const [nx, ny] = this.info.dims;
    this.boxRect.setAttribute('x', String((region.lo[0] / nx) * MAP_W));
    this.boxRect.setAttribute('y', String((region.lo[1] / ny) * MAP_H));
    this.boxRect.setAttribute('width', String(((region.hi[0] - region.lo[0] + 1) / nx) * MAP_W));
    this.boxRect.setAttribute('height', String(((region.hi[1] - region.lo[1] + 1) / ny) * MAP_H));
    this.boxRect.setAttribute('visibility', 'visible');
  }

  async refresh(): Promise<void> {
    const s = this.store.state;
    if (!s.dataset) return;
    try {
      const doc = await this.api.glyphs('global', s.dataset, {
        t: s.t,
        type: 'squid',
        exponent: s.exponent,
        segments: s.segments,
        scale: s.userScale,
      });
      if (this.group) this.viewport.scene.remove(this.group);
      this.group = sceneToGroup(doc);
      this.viewport.scene.add(this.group);
      this.viewport.frame(new THREE.Box3().setFromObject(this.group));
      this.countLabel.textContent = String(this.group.userData.glyphCount);
    } catch (err) {
      if (!isAbort(err)) throw err;
    }
  }

  glyphCount(): number {
    return this.group ? (this.group.userData.glyphCount as number) : 0;
  }
}
