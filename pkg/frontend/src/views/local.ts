import * as THREE from 'three';
import type { ApiClient } from '../api';
import { isAbort } from '../api';
import type { Store } from '../state';
import type { DatasetInfo, GlyphKind } from '../types';
import { sceneToGroup } from './meshes';
import { Viewport } from './viewport';

const KINDS: GlyphKind[] = ['squid', 'cone', 'comet', 'tailed-disc'];
const OVERLAY_OPACITY = 0.3;

/**
 * Region-local view with a glyph-type switch and a neighboring-time
 * overlay (t-1 and t+1 rendered transparent under the selected step).
 */
export class LocalView {
  readonly viewport: Viewport;
  private group: THREE.Group | null = null;
  private overlayGroups: THREE.Group[] = [];
  private info: DatasetInfo | null = null;
  private countLabel: HTMLElement;
  readonly typeSelect: HTMLSelectElement;
  readonly overlayToggle: HTMLInputElement;

  constructor(
    container: HTMLElement,
    private store: Store,
    private api: ApiClient,
  ) {
    const panel = document.createElement('div');
    panel.className = 'panel';
    panel.innerHTML = '<h2>Region view</h2>';
    const toolbar = document.createElement('div');
    toolbar.className = 'toolbar';

    this.typeSelect = document.createElement('select');
    this.typeSelect.id = 'glyph-type';
    for (const kind of KINDS) {
      const opt = document.createElement('option');
      opt.value = kind;
      opt.textContent = kind;
      this.typeSelect.appendChild(opt);
    }
    this.typeSelect.addEventListener('change', () => {
      this.store.update({ glyphType: this.typeSelect.value as GlyphKind });
    });
    const typeLabel = document.createElement('label');
    typeLabel.append('glyph ', this.typeSelect);
    toolbar.appendChild(typeLabel);

    this.overlayToggle = document.createElement('input');
    this.overlayToggle.type = 'checkbox';
    this.overlayToggle.id = 'overlay-neighbors';
    this.overlayToggle.addEventListener('change', () => {
      this.store.update({ overlay: this.overlayToggle.checked });
    });
    const overlayLabel = document.createElement('label');
    overlayLabel.append(this.overlayToggle, ' neighbor times');
    toolbar.appendChild(overlayLabel);

    const count = document.createElement('span');
    count.innerHTML = 'glyphs: <span id="local-count">0</span>';
    toolbar.appendChild(count);

    panel.appendChild(toolbar);
    const body = document.createElement('div');
    body.className = 'body';
    panel.appendChild(body);
    container.appendChild(panel);

    this.viewport = new Viewport(body);
    this.countLabel = toolbar.querySelector('#local-count') as HTMLElement;
  }

  setDataset(info: DatasetInfo): void {
    this.info = info;
  }

  async refresh(): Promise<void> {
    const s = this.store.state;
    if (!s.dataset) return;
    this.typeSelect.value = s.glyphType;
    this.overlayToggle.checked = s.overlay;
    try {
      const doc = await this.api.glyphs('local', s.dataset, {
        t: s.t,
        type: s.glyphType,
        region: s.region,
        exponent: s.exponent,
        segments: s.segments,
        scale: s.userScale,
      });
      if (this.group) this.viewport.scene.remove(this.group);
      this.group = sceneToGroup(doc);
      this.viewport.scene.add(this.group);
      this.viewport.frame(new THREE.Box3().setFromObject(this.group));
      this.countLabel.textContent = String(this.group.userData.glyphCount);
      await this.refreshOverlay();
    } catch (err) {
      if (!isAbort(err)) throw err;
    }
  }

  private async refreshOverlay(): Promise<void> {
    for (const g of this.overlayGroups) this.viewport.scene.remove(g);
    this.overlayGroups = [];
    const s = this.store.state;
    if (!s.overlay || !s.dataset || !this.info) return;
    const neighbors = [s.t - 1, s.t + 1].filter((t) => t >= 0 && t < this.info!.nt);
    for (const t of neighbors) {
      try {
        const doc = await this.api.glyphs(`local-overlay-${t - s.t}`, s.dataset, {
          t,
          type: s.glyphType,
          region: s.region,
          exponent: s.exponent,
          segments: s.segments,
          scale: s.userScale,
        });
        const group = sceneToGroup(doc, OVERLAY_OPACITY);
        this.overlayGroups.push(group);
        this.viewport.scene.add(group);
      } catch (err) {
        if (!isAbort(err)) throw err;
      }
    }
  }

  glyphCount(): number {
    return this.group ? (this.group.userData.glyphCount as number) : 0;
  }

  overlayCount(): number {
    return this.overlayGroups.reduce(
      (acc, g) => acc + (g.userData.glyphCount as number), 0,
    );
  }
}
