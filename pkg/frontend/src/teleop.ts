/**
 * On-screen teleoperation: a 14-value leader pose edited by sliders and
 * two-handed keyboard bindings, streamed as LeaderCommand at up to 50Hz,
 * and a side/top schematic of both arm pairs drawn from Telemetry.
 */

import { KioskConnection } from './connection.js';
import { ChainDescription, armPoints, splitArms } from './kinematics.js';
import { Telemetry } from './protocol.js';

export const JOINT_NAMES = ['waist', 'shoulder', 'elbow', 'roll', 'pitch', 'wrist', 'grip'];

// left hand controls the left arm, right hand the right arm
const KEY_BINDINGS: Record<string, { joint: number; delta: number }> = {
  q: { joint: 0, delta: +1 }, a: { joint: 0, delta: -1 },
  w: { joint: 1, delta: +1 }, s: { joint: 1, delta: -1 },
  e: { joint: 2, delta: +1 }, d: { joint: 2, delta: -1 },
  r: { joint: 4, delta: +1 }, f: { joint: 4, delta: -1 },
  t: { joint: 6, delta: +1 }, g: { joint: 6, delta: -1 },
  u: { joint: 7, delta: +1 }, j: { joint: 7, delta: -1 },
  i: { joint: 8, delta: +1 }, k: { joint: 8, delta: -1 },
  o: { joint: 9, delta: +1 }, l: { joint: 9, delta: -1 },
  p: { joint: 11, delta: +1 }, ';': { joint: 11, delta: -1 },
  '[': { joint: 13, delta: +1 }, "'": { joint: 13, delta: -1 },
};

const JOINT_STEP = 0.035; // rad per key repeat at 50Hz
const GRIP_STEP = 0.05;

export class TeleopController {
  pose: number[];
  private held = new Set<string>();
  private streamTimer: ReturnType<typeof setInterval> | null = null;

  constructor(private connection: KioskConnection, homePose: number[]) {
    this.pose = homePose.slice();
  }

  keyDown(key: string): void {
    if (key in KEY_BINDINGS) this.held.add(key);
  }

  keyUp(key: string): void {
    this.held.delete(key);
  }

  setJoint(index: number, value: number): void {
    this.pose[index] = value;
  }

  /** Apply held keys and stream the pose; called on a 20ms cadence. */
  step(): void {
    for (const key of this.held) {
      const { joint, delta } = KEY_BINDINGS[key];
      const step = joint === 6 || joint === 13 ? GRIP_STEP : JOINT_STEP;
      this.pose[joint] += delta * step;
      if (joint === 6 || joint === 13) {
        this.pose[joint] = Math.min(1, Math.max(0, this.pose[joint]));
      }
    }
    this.connection.sendCommand(this.pose.slice());
  }

  startStreaming(): void {
    if (this.streamTimer === null) {
      this.streamTimer = setInterval(() => this.step(), 20);
    }
  }

  stopStreaming(): void {
    if (this.streamTimer !== null) {
      clearInterval(this.streamTimer);
      this.streamTimer = null;
    }
  }
}

/** Side (x-z) and top (x-y) projections of all four arms onto a canvas. */
export class SchematicRenderer {
  constructor(private canvas: HTMLCanvasElement, private chain: ChainDescription) {}

  draw(t: Telemetry): void {
    const ctx = this.canvas.getContext('2d');
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    this.drawView(ctx, t, 0, 0, width, height / 2, 'side');
    this.drawView(ctx, t, 0, height / 2, width, height / 2, 'top');
  }

  private drawView(
    ctx: CanvasRenderingContext2D, t: Telemetry,
    x0: number, y0: number, w: number, h: number, view: 'side' | 'top',
  ): void {
    const scale = Math.min(w, h) / 1.9;
    const cx = x0 + w / 2;
    const cy = y0 + h * (view === 'side' ? 0.82 : 0.5);
    const project = (p: number[]) =>
      view === 'side'
        ? [cx + p[0] * scale, cy - p[2] * scale]
        : [cx + p[0] * scale, cy + p[1] * scale];

    ctx.strokeStyle = '#444';
    ctx.beginPath();
    if (view === 'side') {
      const [tx, ty] = project([-0.9, 0, this.chain.table_z]);
      const [tx2] = project([0.9, 0, this.chain.table_z]);
      ctx.moveTo(tx, ty);
      ctx.lineTo(tx2, ty);
    }
    ctx.stroke();

    const arms: Array<[string, number[], string]> = [];
    const [ll, lr] = splitArms(t.leader);
    const [fl, fr] = splitArms(t.follower);
    arms.push(['leader_left', ll, '#7a8bd4'], ['leader_right', lr, '#7a8bd4']);
    arms.push(['follower_left', fl, '#d4a03c'], ['follower_right', fr, '#d4a03c']);
    for (const [base, joints, color] of arms) {
      const pts = armPoints(this.chain, base, joints).map(project);
      ctx.strokeStyle = color;
      ctx.lineWidth = 3;
      ctx.beginPath();
      ctx.moveTo(pts[0][0], pts[0][1]);
      for (const [px, py] of pts.slice(1)) ctx.lineTo(px, py);
      ctx.stroke();
      const tip = pts[pts.length - 1];
      ctx.fillStyle = color;
      ctx.beginPath();
      ctx.arc(tip[0], tip[1], 3, 0, 2 * Math.PI);
      ctx.fill();
    }
    ctx.fillStyle = '#888';
    ctx.font = '11px sans-serif';
    ctx.fillText(view === 'side' ? 'side view' : 'top view', x0 + 8, y0 + 14);
  }
}
