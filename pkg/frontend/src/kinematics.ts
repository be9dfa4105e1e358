/**
 * Minimal forward kinematics for the 2-D schematic. The chain description
 * (axes, offsets, base poses) arrives in the Teleop/Tutorial page payload,
 * so the client never hardcodes the rig.
 */

export interface ChainDescription {
  axes: number[][];
  offsets: number[][];
  finger_length: number;
  bases: Record<string, { position: number[]; yaw: number }>;
  table_z: number;
}

type Mat3 = number[][];

function rot(axis: number[], angle: number): Mat3 {
  const [x, y, z] = axis;
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  const C = 1 - c;
  return [
    [x * x * C + c, x * y * C - z * s, x * z * C + y * s],
    [y * x * C + z * s, y * y * C + c, y * z * C - x * s],
    [z * x * C - y * s, z * y * C + x * s, z * z * C + c],
  ];
}

function matMul(a: Mat3, b: Mat3): Mat3 {
  const out: Mat3 = [[0, 0, 0], [0, 0, 0], [0, 0, 0]];
  for (let i = 0; i < 3; i++) {
    for (let j = 0; j < 3; j++) {
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    }
  }
  return out;
}

function apply(m: Mat3, v: number[]): number[] {
  return [
    m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
    m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
    m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
  ];
}

/** World positions of the base and each joint frame origin for one arm. */
export function armPoints(chain: ChainDescription, base: string, joints7: number[]): number[][] {
  const pose = chain.bases[base];
  let R = rot([0, 0, 1], pose.yaw);
  let p = pose.position.slice();
  const points = [p.slice()];
  for (let i = 0; i < chain.axes.length; i++) {
    R = matMul(R, rot(chain.axes[i], joints7[i]));
    const step = apply(R, chain.offsets[i]);
    p = [p[0] + step[0], p[1] + step[1], p[2] + step[2]];
    points.push(p.slice());
  }
  return points;
}

/** Split a 14-vector into the two per-arm 7-vectors. */
export function splitArms(joints14: number[]): [number[], number[]] {
  return [joints14.slice(0, 7), joints14.slice(7, 14)];
}
