/** Dark-violet -> yellow ramp for depth in [0, 1] (presentation only). */

const STOPS: [number, [number, number, number]][] = [
  [0.0, [68, 1, 84]],
  [0.25, [59, 82, 139]],
  [0.5, [33, 145, 140]],
  [0.75, [94, 201, 98]],
  [1.0, [253, 231, 37]],
];

export function depthColor(value: number): string {
  const v = Math.min(1, Math.max(0, value));
  for (let s = 1; s < STOPS.length; s++) {
    if (v <= STOPS[s][0]) {
      const [v0, c0] = STOPS[s - 1];
      const [v1, c1] = STOPS[s];
      const f = v1 === v0 ? 0 : (v - v0) / (v1 - v0);
      const rgb = c0.map((c, idx) => Math.round(c + f * (c1[idx] - c)));
      return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
    }
  }
  return 'rgb(253,231,37)';
}
