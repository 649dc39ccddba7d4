import * as THREE from 'three';
import type { ApiClient } from '../api';
import { isAbort } from '../api';
import type { Store } from '../state';
import type { PointDoc } from '../types';
import { depthColor } from './colors';
import { squidFromSummary, triangleCount } from './meshes';
import { webglAvailable } from './viewport';

const SVG_NS = 'http://www.w3.org/2000/svg';
const CELL = 14;
const DETAIL_W = 300;
const DETAIL_H = 180;
const PAD = 30;

/**
 * Depth heatmap (locations x members) for the current region plus the
 * per-member detail of the picked location with the outlier-k control and
 * the paired with/without-outliers squids. All plotted values come
 * verbatim from the API.
 */
export class DepthView {
  private heatmapSvg: SVGSVGElement;
  private detailSvg: SVGSVGElement;
  private detailCaption: HTMLElement;
  readonly outlierInput: HTMLInputElement;
  private squidPair: { full: THREE.Mesh | null; retained: THREE.Mesh | null } = {
    full: null,
    retained: null,
  };
  private pairContainer: HTMLElement;
  private lastPoint: PointDoc | null = null;

  constructor(
    container: HTMLElement,
    private store: Store,
    private api: ApiClient,
  ) {
    const panel = document.createElement('div');
    panel.className = 'panel';
    panel.innerHTML = '<h2>Vector depth &amp; point detail</h2>';
    const toolbar = document.createElement('div');
    toolbar.className = 'toolbar';
    this.outlierInput = document.createElement('input');
    this.outlierInput.type = 'number';
    this.outlierInput.id = 'outlier-k';
    this.outlierInput.min = '0';
    this.outlierInput.value = '0';
    this.outlierInput.addEventListener('change', () => {
      const k = Math.max(0, Number(this.outlierInput.value) || 0);
      this.store.update({ outlierK: k });
    });
    const label = document.createElement('label');
    label.append('remove k lowest-depth members ', this.outlierInput);
    toolbar.appendChild(label);
    panel.appendChild(toolbar);

    const body = document.createElement('div');
    body.className = 'body';
    panel.appendChild(body);
    container.appendChild(panel);

    this.heatmapSvg = document.createElementNS(SVG_NS, 'svg');
    this.heatmapSvg.setAttribute('id', 'depth-heatmap');
    body.appendChild(this.heatmapSvg);

    this.detailCaption = document.createElement('div');
    this.detailCaption.className = 'legend';
    this.detailCaption.id = 'detail-caption';
    this.detailCaption.textContent = 'click a heatmap cell to inspect a location';
    body.appendChild(this.detailCaption);

    this.detailSvg = document.createElementNS(SVG_NS, 'svg');
    this.detailSvg.setAttribute('id', 'point-detail');
    this.detailSvg.setAttribute('viewBox', `0 0 ${DETAIL_W} ${DETAIL_H}`);
    this.detailSvg.setAttribute('width', String(DETAIL_W));
    body.appendChild(this.detailSvg);

    this.pairContainer = document.createElement('div');
    this.pairContainer.id = 'squid-pair';
    this.pairContainer.style.display = 'none';
    body.appendChild(this.pairContainer);
  }

  async refreshHeatmap(): Promise<void> {
    const s = this.store.state;
    if (!s.dataset) return;
    try {
      const doc = await this.api.depth('heatmap', s.dataset, s.t, s.region);
      const svg = this.heatmapSvg;
      svg.replaceChildren();
      const rows = doc.locations.length;
      const cols = doc.members.length;
      svg.setAttribute('viewBox', `0 0 ${cols * CELL + 40} ${rows * CELL + 4}`);
      svg.setAttribute('width', String(Math.min(cols * CELL + 40, 560)));
      doc.locations.forEach((loc, row) => {
        for (let m = 0; m < cols; m++) {
          const rect = document.createElementNS(SVG_NS, 'rect');
          rect.setAttribute('class', 'dh-cell');
          rect.setAttribute('x', String(40 + m * CELL));
          rect.setAttribute('y', String(2 + row * CELL));
          rect.setAttribute('width', String(CELL - 1));
          rect.setAttribute('height', String(CELL - 1));
          rect.setAttribute('fill', depthColor(doc.depth[row][m]));
          rect.setAttribute('data-i', String(loc[0]));
          rect.setAttribute('data-j', String(loc[1]));
          rect.setAttribute('data-k', String(loc[2]));
          rect.setAttribute('data-member', String(m));
          const tip = document.createElementNS(SVG_NS, 'title');
          tip.textContent = `loc ${loc.join(',')} member ${m} depth ${doc.depth[row][m]}`;
          rect.appendChild(tip);
          rect.addEventListener('click', () => {
            this.store.update({ picked: [loc[0], loc[1], loc[2]] });
          });
          svg.appendChild(rect);
        }
        const rowLabel = document.createElementNS(SVG_NS, 'text');
        rowLabel.setAttribute('x', '2');
        rowLabel.setAttribute('y', String(row * CELL + CELL - 2));
        rowLabel.setAttribute('font-size', '9');
        rowLabel.textContent = loc.join(',');
        svg.appendChild(rowLabel);
      });
    } catch (err) {
      if (!isAbort(err)) throw err;
    }
  }

  async refreshDetail(): Promise<void> {
    const s = this.store.state;
    if (!s.dataset || !s.picked) {
      this.clearDetail();
      return;
    }
    try {
      const doc = await this.api.point(s.dataset, s.t, s.picked, s.outlierK);
      this.lastPoint = doc;
      this.outlierInput.value = String(s.outlierK);
      this.drawDetail(doc);
      this.drawSquidPair(doc);
    } catch (err) {
      if (!isAbort(err)) throw err;
    }
  }

  private clearDetail(): void {
    this.lastPoint = null;
    this.detailSvg.replaceChildren();
    this.pairContainer.style.display = 'none';
    this.squidPair = { full: null, retained: null };
    this.detailCaption.textContent = 'click a heatmap cell to inspect a location';
  }

  private drawDetail(doc: PointDoc): void {
    const svg = this.detailSvg;
    svg.replaceChildren();
    this.detailCaption.textContent =
      `location ${doc.location.join(',')} at t=${doc.t}: magnitude vs angle, ` +
      'color = depth, ring = outlier candidate';
    const maxMag = Math.max(...doc.details.map((d) => d.magnitude), 1e-12);
    const maxAng = Math.max(...doc.details.map((d) => d.angle_to_median), 1e-3);
    for (const d of doc.details) {
      const dot = document.createElementNS(SVG_NS, 'circle');
      dot.setAttribute('class', 'pd-member');
      dot.setAttribute('data-member', String(d.member_index));
      dot.setAttribute(
        'cx',
        String(PAD + (d.angle_to_median / maxAng) * (DETAIL_W - 2 * PAD)),
      );
      dot.setAttribute(
        'cy',
        String(DETAIL_H - PAD - (d.magnitude / maxMag) * (DETAIL_H - 2 * PAD)),
      );
      dot.setAttribute('r', '5');
      dot.setAttribute('fill', depthColor(d.depth));
      if (d.is_outlier_candidate) {
        dot.setAttribute('stroke', '#d22');
        dot.setAttribute('stroke-width', '2');
        dot.setAttribute('data-outlier', '1');
      }
      const tip = document.createElementNS(SVG_NS, 'title');
      tip.textContent =
        `member ${d.member_index}: |v|=${d.magnitude} angle=${d.angle_to_median} ` +
        `depth=${d.depth}`;
      dot.appendChild(tip);
      svg.appendChild(dot);
    }
    const xl = document.createElementNS(SVG_NS, 'text');
    xl.setAttribute('x', String(DETAIL_W / 2 - 30));
    xl.setAttribute('y', String(DETAIL_H - 6));
    xl.setAttribute('font-size', '10');
    xl.textContent = 'angle to median';
    svg.appendChild(xl);
  }

  private drawSquidPair(doc: PointDoc): void {
    this.pairContainer.replaceChildren();
    this.pairContainer.style.display = 'flex';
    const scale = 1 / Math.max(doc.summary_full.h + doc.summary_full.delta_h, 1e-9);
    this.squidPair = {
      full: squidFromSummary(doc.summary_full, scale),
      retained: squidFromSummary(doc.summary_retained, scale),
    };
    for (const [name, mesh] of [
      ['with all members', this.squidPair.full],
      [`without ${doc.outliers} outlier(s)`, this.squidPair.retained],
    ] as const) {
      const slot = document.createElement('figure');
      slot.className = 'squid-slot';
      const canvas = document.createElement('canvas');
      canvas.width = 140;
      canvas.height = 140;
      slot.appendChild(canvas);
      const cap = document.createElement('figcaption');
      cap.textContent = name;
      slot.appendChild(cap);
      this.pairContainer.appendChild(slot);
      if (mesh) this.renderMini(canvas, mesh);
    }
  }

  private renderMini(canvas: HTMLCanvasElement, mesh: THREE.Mesh): void {
    if (!webglAvailable()) {
      return; // headless: meshes remain inspectable via squidPairTriangles()
    }
    let renderer: THREE.WebGLRenderer;
    try {
      renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    } catch {
      return;
    }
    const scene = new THREE.Scene();
    scene.background = new THREE.Color(0xffffff);
    scene.add(new THREE.AmbientLight(0xffffff, 0.8));
    const sun = new THREE.DirectionalLight(0xffffff, 1.0);
    sun.position.set(2, -1, 3);
    scene.add(sun);
    scene.add(mesh);
    const camera = new THREE.PerspectiveCamera(40, 1, 0.01, 100);
    camera.position.set(1.6, -1.6, 1.2);
    camera.up.set(0, 0, 1);
    camera.lookAt(0, 0, 0.5);
    renderer.setSize(canvas.width, canvas.height, false);
    renderer.render(scene, camera);
  }

  squidPairTriangles(): { full: number; retained: number } {
    return {
      full: triangleCount(this.squidPair.full),
      retained: triangleCount(this.squidPair.retained),
    };
  }

  pointDoc(): PointDoc | null {
    return this.lastPoint;
  }
}
