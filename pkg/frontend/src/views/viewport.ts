import * as THREE from 'three';

/** True when the runtime can actually hand out a WebGL context. */
export function webglAvailable(): boolean {
  return typeof WebGL2RenderingContext !== 'undefined';
}

/**
 * Scene + camera + (when WebGL is available) renderer with orbit controls.
 * Headless environments still get the full scene graph, so view logic and
 * tests run without a GPU; only drawing is skipped.
 */
export class Viewport {
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  readonly canvas: HTMLCanvasElement;
  private renderer: THREE.WebGLRenderer | null = null;
  private controls: { update(): void } | null = null;

  constructor(container: HTMLElement) {
    this.canvas = document.createElement('canvas');
    this.canvas.className = 'view3d';
    container.appendChild(this.canvas);
    this.camera = new THREE.PerspectiveCamera(45, 4 / 3, 0.01, 1000);
    this.camera.position.set(2.5, -2.5, 2.0);
    this.camera.up.set(0, 0, 1);
    this.scene.background = new THREE.Color(0xffffff);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 1.2);
    sun.position.set(3, -2, 5);
    this.scene.add(sun);
    this.tryStartRendering();
  }

  private tryStartRendering(): void {
    if (!webglAvailable()) {
      this.renderer = null; // headless: keep the scene graph only
      return;
    }
    try {
      this.renderer = new THREE.WebGLRenderer({ canvas: this.canvas, antialias: true });
    } catch {
      this.renderer = null;
      return;
    }
    void import('three/examples/jsm/controls/OrbitControls.js').then(({ OrbitControls }) => {
      const controls = new OrbitControls(this.camera, this.canvas);
      controls.enableDamping = true;
      this.controls = controls;
    });
    const loop = () => {
      if (!this.renderer) return;
      const w = this.canvas.clientWidth || 640;
      const h = this.canvas.clientHeight || 480;
      this.renderer.setSize(w, h, false);
      this.camera.aspect = w / h;
      this.camera.updateProjectionMatrix();
      this.controls?.update();
      this.renderer.render(this.scene, this.camera);
      requestAnimationFrame(loop);
    };
    requestAnimationFrame(loop);
  }

  frame(bounds: THREE.Box3): void {
    if (bounds.isEmpty()) return;
    const center = bounds.getCenter(new THREE.Vector3());
    const size = bounds.getSize(new THREE.Vector3()).length() || 1;
    this.camera.position.copy(center).add(new THREE.Vector3(size, -size, size * 0.8));
    this.camera.lookAt(center);
  }
}
