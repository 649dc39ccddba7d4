import * as THREE from 'three';
import type { GlyphEntry, GlyphSceneDoc, SummaryRecord } from '../types';

/** body / head / disc part colors (documented in the page footer). */
export const PART_COLORS = [0x4477aa, 0xee6677, 0xccbb44];

function partMaterial(partId: number, opacity: number): THREE.Material {
  return new THREE.MeshLambertMaterial({
    color: PART_COLORS[partId] ?? 0x888888,
    transparent: opacity < 1,
    opacity,
  });
}

/** One API glyph entry -> positioned mesh (null for skipped glyphs). */
export function glyphEntryToMesh(entry: GlyphEntry, opacity = 1): THREE.Mesh | null {
  if (entry.skipped || !entry.positions || !entry.indices || !entry.transform) return null;
  const geo = new THREE.BufferGeometry();
  geo.setAttribute('position', new THREE.Float32BufferAttribute(entry.positions, 3));
  if (entry.normals) {
    geo.setAttribute('normal', new THREE.Float32BufferAttribute(entry.normals, 3));
  }
  geo.setIndex(entry.indices);

  // contiguous part_id runs -> geometry groups, one material per part
  const partIds = entry.part_ids ?? [];
  const materials: THREE.Material[] = [];
  const matIndex = new Map<number, number>();
  let runStart = 0;
  for (let t = 1; t <= partIds.length; t++) {
    if (t === partIds.length || partIds[t] !== partIds[runStart]) {
      const part = partIds[runStart];
      if (!matIndex.has(part)) {
        matIndex.set(part, materials.length);
        materials.push(partMaterial(part, opacity));
      }
      geo.addGroup(runStart * 3, (t - runStart) * 3, matIndex.get(part)!);
      runStart = t;
    }
  }
  const mesh = new THREE.Mesh(geo, materials.length ? materials : partMaterial(0, opacity));
  const [x, y, z] = entry.transform.origin;
  mesh.position.set(x, y, z);
  mesh.userData.location = entry.location;
  return mesh;
}

/** Whole scene document -> THREE.Group; group.userData.glyphCount counts meshes. */
export function sceneToGroup(doc: GlyphSceneDoc, opacity = 1): THREE.Group {
  const group = new THREE.Group();
  let count = 0;
  for (const entry of doc.glyphs) {
    const mesh = glyphEntryToMesh(entry, opacity);
    if (mesh) {
      group.add(mesh);
      count += 1;
    }
  }
  group.userData.glyphCount = count;
  group.userData.scale = doc.scale;
  return group;
}

// --- client-built squid for the paired detail view ------------------------
//
// The /point endpoint returns summary parameters, not meshes; the paired
// with/without-outliers squids are presentation geometry rebuilt from those
// verbatim parameters (median_dir, h, delta_h, r0, r1, spread axes).

function unit(v: THREE.Vector3): THREE.Vector3 | null {
  const n = v.length();
  return n > 1e-12 ? v.clone().divideScalar(n) : null;
}

function frameFrom(summary: SummaryRecord): [THREE.Vector3, THREE.Vector3, THREE.Vector3] {
  const w = new THREE.Vector3(...(summary.median_dir as [number, number, number]));
  let u0 = unit(new THREE.Vector3(...(summary.sigma0 as [number, number, number])));
  let u1 = unit(new THREE.Vector3(...(summary.sigma1 as [number, number, number])));
  if (!u0) {
    // same fallback rule as the producer: project out the least-aligned axis
    const axes = [new THREE.Vector3(1, 0, 0), new THREE.Vector3(0, 1, 0), new THREE.Vector3(0, 0, 1)];
    let best = 0;
    for (let a = 1; a < 3; a++) {
      if (Math.abs(axes[a].dot(w)) < Math.abs(axes[best].dot(w))) best = a;
    }
    u0 = axes[best].clone().addScaledVector(w, -axes[best].dot(w)).normalize();
    u1 = null;
  }
  if (!u1) u1 = w.clone().cross(u0);
  if (u0.clone().cross(u1).dot(w) < 0) u1.negate();
  return [u0, u1, w];
}

export function squidFromSummary(
  summary: SummaryRecord,
  scale: number,
  segments = 24,
  exponent = 2.5,
): THREE.Mesh | null {
  if (summary.degenerate.zero_median) return null;
  const [u0, u1, w] = frameFrom(summary);
  const total = (summary.h + summary.delta_h) * scale;
  const bodyLen = summary.h * scale;
  const headLen = Math.max(summary.delta_h * scale, 0.02 * scale);
  const tip = bodyLen + headLen;
  const r0 = Math.max(summary.r0 * scale, 0.01 * scale);
  const r1 = Math.max(summary.r1 * scale, 0.01 * scale);

  const q = 2 / exponent;
  const profile: [number, number][] = [];
  for (let s = 0; s < segments; s++) {
    const a = (2 * Math.PI * s) / segments;
    const c = Math.cos(a);
    const si = Math.sin(a);
    profile.push([Math.sign(c) * Math.abs(c) ** q, Math.sign(si) * Math.abs(si) ** q]);
  }

  const positions: number[] = [];
  const pushRing = (z: number) => {
    const start = positions.length / 3;
    const az = (r0 * z) / total;
    const bz = (r1 * z) / total;
    for (const [px, py] of profile) {
      positions.push(
        az * px * u0.x + bz * py * u1.x + z * w.x,
        az * px * u0.y + bz * py * u1.y + z * w.y,
        az * px * u0.z + bz * py * u1.z + z * w.z,
      );
    }
    return start;
  };
  const apex = positions.length / 3;
  positions.push(0, 0, 0);
  const ringLo = pushRing(Math.max(bodyLen, 1e-6 * tip));
  const ringHi = pushRing(tip);
  const top = positions.length / 3;
  positions.push(tip * w.x, tip * w.y, tip * w.z);

  const indices: number[] = [];
  const partIds: number[] = [];
  for (let s = 0; s < segments; s++) {
    const s2 = (s + 1) % segments;
    indices.push(apex, ringLo + s2, ringLo + s);
    partIds.push(0);
    indices.push(ringLo + s, ringLo + s2, ringHi + s2, ringLo + s, ringHi + s2, ringHi + s);
    partIds.push(1, 1);
    indices.push(top, ringHi + s, ringHi + s2);
    partIds.push(1);
  }

  const geo = new THREE.BufferGeometry();
  geo.setAttribute('position', new THREE.Float32BufferAttribute(positions, 3));
  geo.setIndex(indices);
  geo.computeVertexNormals();
  let runStart = 0;
  const materials: THREE.Material[] = [];
  const matIndex = new Map<number, number>();
  for (let t = 1; t <= partIds.length; t++) {
    if (t === partIds.length || partIds[t] !== partIds[runStart]) {
      const part = partIds[runStart];
      if (!matIndex.has(part)) {
        matIndex.set(part, materials.length);
        materials.push(partMaterial(part, 1));
      }
      geo.addGroup(runStart * 3, (t - runStart) * 3, matIndex.get(part)!);
      runStart = t;
    }
  }
  return new THREE.Mesh(geo, materials);
}

export function triangleCount(mesh: THREE.Mesh | null): number {
  if (!mesh) return 0;
  const index = mesh.geometry.getIndex();
  return index ? index.count / 3 : 0;
}
