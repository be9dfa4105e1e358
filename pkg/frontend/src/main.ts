/**
 * Kiosk client bootstrap: connect, route pages, run the alarm and the
 * teleoperation loop. Served statically; the service URL comes from the
 * page location (same host, /ws).
 */

import { AlarmController, audioBeeper } from './alarm.js';
import { KioskConnection, webSocketTransport } from './connection.js';
import { ChainDescription } from './kinematics.js';
import { PageRouter, fillLeaderboard } from './pages.js';
import { SchematicRenderer, TeleopController } from './teleop.js';

function start(): void {
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app element');
  const wsUrl = `ws://${location.host}/ws`;
  const connection = new KioskConnection(webSocketTransport(wsUrl));
  const router = new PageRouter({ connection, root });

  const banner = {
    show: () => document.getElementById('collision-banner')?.classList.remove('hidden'),
    hide: () => document.getElementById('collision-banner')?.classList.add('hidden'),
  };
  const alarm = new AlarmController(banner, audioBeeper());

  let teleop: TeleopController | null = null;
  let schematic: SchematicRenderer | null = null;

  connection.onMessage((msg) => {
    switch (msg.type) {
      case 'PageDirective': {
        router.handleDirective(msg);
        teleop?.stopStreaming();
        teleop = null;
        schematic = null;
        const chain = msg.payload.chain as ChainDescription | undefined;
        if ((msg.page === 'Teleop' || msg.page === 'Tutorial') && chain && chain.axes) {
          const canvas = root.querySelector('canvas.schematic') as HTMLCanvasElement | null;
          if (canvas) schematic = new SchematicRenderer(canvas, chain);
        }
        if (msg.page === 'Teleop') {
          const home = (msg.payload.home_pose as number[]) ?? new Array(14).fill(0);
          const controller = new TeleopController(connection, home);
          teleop = controller;
          root.querySelectorAll<HTMLInputElement>('.joint-slider').forEach((slider) => {
            slider.addEventListener('input', () => {
              controller.setJoint(Number(slider.dataset.joint), Number(slider.value));
            });
          });
          controller.startStreaming();
        }
        break;
      }
      case 'Telemetry':
        schematic?.draw(msg);
        break;
      case 'CollisionAlarm':
        alarm.handleAlarm(msg.on);
        break;
      case 'LeaderboardData':
        fillLeaderboard(root, msg.entries);
        break;
      case 'TimerUpdate': {
        const node = document.getElementById('countdown');
        if (node) node.textContent = `${msg.seconds_remaining}s`;
        break;
      }
      case 'EpisodeClosed':
        console.info(`episode closed (${msg.termination}), +${msg.points_awarded} points`);
        break;
      case 'Error':
        console.warn(`${msg.code}: ${msg.message}`);
        break;
    }
  });

  document.addEventListener('keydown', (e) => teleop?.keyDown(e.key));
  document.addEventListener('keyup', (e) => teleop?.keyUp(e.key));
}

if (typeof document !== 'undefined' && document.readyState !== 'loading') {
  start();
} else if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', start);
}
