/** Minimal 3D math for the canvas view: an orbiting perspective camera and
 * wireframe generators for the primitive kinds.  No rendering library; the
 * scene is a handful of polylines. */

export type Vec3 = [number, number, number];

export interface Camera {
  azimuth: number;   // rad around +z
  elevation: number; // rad above the xy-plane
  distance: number;
  target: Vec3;
  fov: number;       // vertical, rad
}

export function defaultCamera(): Camera {
  return { azimuth: 0.7, elevation: 0.45, distance: 6.0, target: [0, 0, 0.4], fov: 0.9 };
}

export function cameraPosition(cam: Camera): Vec3 {
  const ce = Math.cos(cam.elevation);
  return [
    cam.target[0] + cam.distance * ce * Math.cos(cam.azimuth),
    cam.target[1] + cam.distance * ce * Math.sin(cam.azimuth),
    cam.target[2] + cam.distance * Math.sin(cam.elevation),
  ];
}

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function norm(a: Vec3): number {
  return Math.sqrt(dot(a, a));
}

function normalize(a: Vec3): Vec3 {
  const n = norm(a) || 1;
  return [a[0] / n, a[1] / n, a[2] / n];
}

/** Project a world point to normalized device coordinates; null when the
 * point sits behind the camera. */
export function project(p: Vec3, cam: Camera): [number, number] | null {
  const eye = cameraPosition(cam);
  const forward = normalize(sub(cam.target, eye));
  const right = normalize(cross(forward, [0, 0, 1]));
  const up = cross(right, forward);
  const rel = sub(p, eye);
  const depth = dot(rel, forward);
  if (depth <= 1e-6) return null;
  const scale = 1 / Math.tan(cam.fov / 2);
  return [(dot(rel, right) / depth) * scale, (dot(rel, up) / depth) * scale];
}

export function projectPolyline(points: Vec3[], cam: Camera): Array<[number, number] | null> {
  return points.map((p) => project(p, cam));
}

function orthonormalFrame(axis: Vec3): [Vec3, Vec3] {
  const n = normalize(axis);
  const seed: Vec3 = Math.abs(n[2]) < 0.9 ? [0, 0, 1] : [1, 0, 0];
  const u = normalize(cross(seed, n));
  const v = cross(n, u);
  return [u, v];
}

/** Wireframe polylines for a primitive given its parameter record. */
export function primitiveWireframe(params: {
  kind: string;
  center?: number[];
  radius?: number;
  normal?: number[];
  direction?: number[];
  endpoints?: number[][];
}, segments = 48): Vec3[][] {
  const c = (params.center ?? [0, 0, 0]) as Vec3;
  switch (params.kind) {
    case "point":
      return [crossMarker(c, 0.05)];
    case "pointpair":
      return (params.endpoints ?? []).map((e) => crossMarker(e as Vec3, 0.05));
    case "line": {
      const d = normalize((params.direction ?? [0, 1, 0]) as Vec3);
      const span = 3.0;
      return [[
        [c[0] - span * d[0], c[1] - span * d[1], c[2] - span * d[2]],
        [c[0] + span * d[0], c[1] + span * d[1], c[2] + span * d[2]],
      ]];
    }
    case "circle":
      return [ring(c, params.radius ?? 1, (params.normal ?? [0, 0, 1]) as Vec3, segments)];
    case "plane": {
      const n = (params.normal ?? [0, 0, 1]) as Vec3;
      const [u, v] = orthonormalFrame(n);
      const s = 1.5;
      const corner = (a: number, b: number): Vec3 => [
        c[0] + a * s * u[0] + b * s * v[0],
        c[1] + a * s * u[1] + b * s * v[1],
        c[2] + a * s * u[2] + b * s * v[2],
      ];
      return [[corner(-1, -1), corner(1, -1), corner(1, 1), corner(-1, 1), corner(-1, -1)]];
    }
    case "sphere": {
      const r = params.radius ?? 1;
      return [
        ring(c, r, [0, 0, 1], segments),
        ring(c, r, [0, 1, 0], segments),
        ring(c, r, [1, 0, 0], segments),
      ];
    }
    default:
      return [];
  }
}

export function ring(center: Vec3, radius: number, axis: Vec3, segments: number): Vec3[] {
  const [u, v] = orthonormalFrame(axis);
  const pts: Vec3[] = [];
  for (let k = 0; k <= segments; k++) {
    const a = (2 * Math.PI * k) / segments;
    pts.push([
      center[0] + radius * (Math.cos(a) * u[0] + Math.sin(a) * v[0]),
      center[1] + radius * (Math.cos(a) * u[1] + Math.sin(a) * v[1]),
      center[2] + radius * (Math.cos(a) * u[2] + Math.sin(a) * v[2]),
    ]);
  }
  return pts;
}

function crossMarker(p: Vec3, s: number): Vec3[] {
  return [
    [p[0] - s, p[1], p[2]], [p[0] + s, p[1], p[2]], [p[0], p[1], p[2]],
    [p[0], p[1] - s, p[2]], [p[0], p[1] + s, p[2]], [p[0], p[1], p[2]],
    [p[0], p[1], p[2] - s], [p[0], p[1], p[2] + s],
  ];
}
