import type { ApiClient } from '../api';
import { isAbort } from '../api';
import type { Store } from '../state';

const W = 460;
const H = 130;
const PAD = 26;

const SVG_NS = 'http://www.w3.org/2000/svg';

function polyline(points: [number, number][], stroke: string): SVGPolylineElement {
  const el = document.createElementNS(SVG_NS, 'polyline');
  el.setAttribute('points', points.map(([x, y]) => `${x},${y}`).join(' '));
  el.setAttribute('fill', 'none');
  el.setAttribute('stroke', stroke);
  el.setAttribute('stroke-width', '1.5');
  return el;
}

/**
 * Magnitude-variation charts: max range per time step (markers clickable,
 * setting the shared t) and the per-location range slice at the selected t.
 * Values are plotted verbatim from the API.
 */
export class MagvarView {
  private seriesSvg: SVGSVGElement;
  private sliceSvg: SVGSVGElement;
  private series: number[] = [];

  constructor(
    container: HTMLElement,
    private store: Store,
    private api: ApiClient,
  ) {
    const panel = document.createElement('div');
    panel.className = 'panel';
    panel.innerHTML = '<h2>Magnitude variation</h2>';
    const body = document.createElement('div');
    body.className = 'body';
    panel.appendChild(body);
    container.appendChild(panel);

    this.seriesSvg = document.createElementNS(SVG_NS, 'svg');
    this.seriesSvg.setAttribute('id', 'magvar-series');
    this.seriesSvg.setAttribute('viewBox', `0 0 ${W} ${H}`);
    this.seriesSvg.setAttribute('width', '100%');
    body.appendChild(this.seriesSvg);

    this.sliceSvg = document.createElementNS(SVG_NS, 'svg');
    this.sliceSvg.setAttribute('id', 'magvar-slice');
    this.sliceSvg.setAttribute('viewBox', `0 0 ${W} ${H}`);
    this.sliceSvg.setAttribute('width', '100%');
    body.appendChild(this.sliceSvg);
  }

  async refreshSeries(): Promise<void> {
    const s = this.store.state;
    if (!s.dataset) return;
    try {
      const doc = await this.api.magvar(s.dataset);
      this.series = doc.series;
      this.drawSeries();
    } catch (err) {
      if (!isAbort(err)) throw err;
    }
  }

  async refreshSlice(): Promise<void> {
    const s = this.store.state;
    if (!s.dataset) return;
    try {
      const doc = await this.api.magvar(s.dataset, s.t);
      this.drawSlice(doc.slice ?? []);
    } catch (err) {
      if (!isAbort(err)) throw err;
    }
  }

  highlightT(): void {
    this.drawSeries();
  }

  private drawSeries(): void {
    const svg = this.seriesSvg;
    svg.replaceChildren();
    if (this.series.length === 0) return;
    const peak = Math.max(...this.series, 1e-12);
    const xOf = (t: number) =>
      PAD + (this.series.length === 1 ? 0 : (t / (this.series.length - 1)) * (W - 2 * PAD));
    const yOf = (v: number) => H - PAD - (v / peak) * (H - 2 * PAD);
    svg.appendChild(
      polyline(this.series.map((v, t) => [xOf(t), yOf(v)] as [number, number]), '#446'),
    );
    this.series.forEach((v, t) => {
      const dot = document.createElementNS(SVG_NS, 'circle');
      dot.setAttribute('class', 'mv-t');
      dot.setAttribute('data-t', String(t));
      dot.setAttribute('cx', String(xOf(t)));
      dot.setAttribute('cy', String(yOf(v)));
      dot.setAttribute('r', '5');
      dot.setAttribute('fill', t === this.store.state.t ? '#d33' : '#88a');
      const tip = document.createElementNS(SVG_NS, 'title');
      tip.textContent = `t=${t} max delta_h=${v}`;
      dot.appendChild(tip);
      dot.addEventListener('click', () => this.store.update({ t }));
      svg.appendChild(dot);
    });
    const label = document.createElementNS(SVG_NS, 'text');
    label.setAttribute('x', '4');
    label.setAttribute('y', '12');
    label.setAttribute('font-size', '10');
    label.textContent = 'max delta_h vs t (click a marker)';
    svg.appendChild(label);
  }

  private drawSlice(slice: number[]): void {
    const svg = this.sliceSvg;
    svg.replaceChildren();
    if (slice.length === 0) return;
    const peak = Math.max(...slice, 1e-12);
    const xOf = (idx: number) =>
      PAD + (slice.length === 1 ? 0 : (idx / (slice.length - 1)) * (W - 2 * PAD));
    const yOf = (v: number) => H - PAD - (v / peak) * (H - 2 * PAD);
    const line = polyline(slice.map((v, idx) => [xOf(idx), yOf(v)] as [number, number]), '#275');
    line.setAttribute('id', 'magvar-slice-line');
    const tip = document.createElementNS(SVG_NS, 'title');
    tip.textContent = slice.map((v, idx) => `${idx}:${v}`).join(' ');
    line.appendChild(tip);
    svg.appendChild(line);
    const label = document.createElementNS(SVG_NS, 'text');
    label.setAttribute('x', '4');
    label.setAttribute('y', '12');
    label.setAttribute('font-size', '10');
    label.setAttribute('id', 'magvar-slice-label');
    label.textContent = `delta_h per location at t=${this.store.state.t}`;
    svg.appendChild(label);
  }
}
