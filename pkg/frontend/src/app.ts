import type { DatasetInfo } from './types';
import { regionContains } from './types';
import { ApiClient } from './api';
import { fromQuery, toQuery, Store, type StateKey } from './state';
import { DepthView } from './views/depth';
import { GlobalView } from './views/global';
import { LocalView } from './views/local';
import { MagvarView } from './views/magvar';

export interface AppOptions {
  apiBase?: string;
  fetchImpl?: typeof fetch;
  syncUrl?: boolean;
}

/**
 * Explorer wiring. Selection flow is acyclic and total:
 *   dataset change -> everything reloads
 *   t change       -> all four views refresh
 *   region change  -> region view + heatmap refresh (picked point cleared
 *                     when it falls outside); global view only redraws its box
 *   glyph type / overlay -> region view only
 *   point pick / outlier k -> detail panel only
 */
export class ExplorerApp {
  readonly store: Store;
  readonly api: ApiClient;
  datasets: DatasetInfo[] = [];
  global!: GlobalView;
  local!: LocalView;
  magvar!: MagvarView;
  depth!: DepthView;
  private syncUrl: boolean;
  /** resolves when the refreshes triggered by the latest change settle */
  idle: Promise<void> = Promise.resolve();

  constructor(
    private root: HTMLElement,
    opts: AppOptions = {},
  ) {
    this.api = new ApiClient(opts.apiBase ?? '', opts.fetchImpl);
    this.store = new Store();
    this.syncUrl = opts.syncUrl ?? true;
  }

  currentDataset(): DatasetInfo | null {
    return this.datasets.find((d) => d.id === this.store.state.dataset) ?? null;
  }

  async boot(query = ''): Promise<void> {
    const initial = fromQuery(query);
    this.datasets = await this.api.datasets();
    if (this.datasets.length === 0) {
      const empty = document.createElement('p');
      empty.id = 'empty-state';
      empty.textContent = 'No datasets found in the served data directory.';
      this.root.appendChild(empty);
      return;
    }
    if (!initial.dataset || !this.datasets.some((d) => d.id === initial.dataset)) {
      initial.dataset = this.datasets[0].id;
    }
    const info = this.datasets.find((d) => d.id === initial.dataset)!;
    if (initial.t >= info.nt) initial.t = 0;
    if (initial.picked && initial.region && !regionContains(initial.region, initial.picked)) {
      initial.picked = null;
    }

    this.global = new GlobalView(this.root, this.store, this.api);
    this.local = new LocalView(this.root, this.store, this.api);
    this.magvar = new MagvarView(this.root, this.store, this.api);
    this.depth = new DepthView(this.root, this.store, this.api);
    this.global.setDataset(info);
    this.local.setDataset(info);

    this.store.subscribe((changed) => this.onChange(changed));
    // the dataset key always changes here (null -> id), so this triggers
    // the first full load through the same path as later changes
    this.store.update(initial);
    await this.idle;
  }

  private refreshAll(): Promise<void> {
    return Promise.all([
      this.global.refresh(),
      this.local.refresh(),
      this.magvar.refreshSeries().then(() => this.magvar.refreshSlice()),
      this.depth.refreshHeatmap(),
      this.depth.refreshDetail(),
    ]).then(() => undefined);
  }

  private onChange(changed: Set<StateKey>): void {
    const tasks: Promise<void>[] = [];
    const state = this.store.state;

    if (changed.has('dataset')) {
      const info = this.currentDataset();
      if (info) {
        this.global.setDataset(info);
        this.local.setDataset(info);
      }
      tasks.push(this.refreshAll());
    } else {
      if (changed.has('t')) {
        this.magvar.highlightT();
        tasks.push(this.global.refresh());
        tasks.push(this.local.refresh());
        tasks.push(this.magvar.refreshSlice());
        tasks.push(this.depth.refreshHeatmap());
        tasks.push(this.depth.refreshDetail());
      }
      if (changed.has('region')) {
        this.global.drawRegionBox(state.region);
        if (state.picked && state.region && !regionContains(state.region, state.picked)) {
          // defer: clearing picked re-enters onChange with a 'picked' change
          this.store.update({ picked: null });
        }
        tasks.push(this.local.refresh());
        tasks.push(this.depth.refreshHeatmap());
      }
      if (changed.has('glyphType') || changed.has('overlay')) {
        tasks.push(this.local.refresh());
      }
      if (changed.has('exponent') || changed.has('segments') || changed.has('userScale')) {
        tasks.push(this.global.refresh());
        tasks.push(this.local.refresh());
      }
      if (changed.has('picked') || changed.has('outlierK')) {
        tasks.push(this.depth.refreshDetail());
      }
    }

    if (this.syncUrl && typeof history !== 'undefined') {
      history.replaceState(null, '', '?' + toQuery(state));
    }
    this.idle = this.idle.then(() => Promise.all(tasks)).then(() => undefined);
  }
}

export async function boot(root: HTMLElement, query: string, opts: AppOptions = {}) {
  const app = new ExplorerApp(root, opts);
  await app.boot(query);
  return app;
}
