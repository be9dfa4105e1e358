/**
 * Collision alarm: a red banner plus a repeating beep while the server
 * says the arms are near collision. Audio must stop within one telemetry
 * period of CollisionAlarm{off}, so the state flips synchronously in the
 * message handler and the beeper checks it every cycle.
 */

export interface Beeper {
  start(): void;
  stop(): void;
}

export class AlarmController {
  private active = false;
  private offAt: number | null = null;

  constructor(
    private banner: { show(): void; hide(): void },
    private beeper: Beeper,
    private now: () => number = () => performance.now(),
  ) {}

  handleAlarm(on: boolean): void {
    if (on === this.active) return; // server messages alternate; be safe anyway
    this.active = on;
    if (on) {
      this.offAt = null;
      this.banner.show();
      this.beeper.start();
    } else {
      this.offAt = this.now();
      this.banner.hide();
      this.beeper.stop();
    }
  }

  get isActive(): boolean {
    return this.active;
  }

  /** Milliseconds between the off message and now; null while active. */
  silenceLatency(): number | null {
    return this.offAt === null ? null : this.now() - this.offAt;
  }
}

/** WebAudio square-wave beeper; constructed lazily on first user gesture. */
export function audioBeeper(): Beeper {
  let ctx: AudioContext | null = null;
  let osc: OscillatorNode | null = null;
  let timer: ReturnType<typeof setInterval> | null = null;
  return {
    start() {
      if (timer !== null) return;
      ctx = ctx ?? new AudioContext();
      timer = setInterval(() => {
        if (!ctx) return;
        osc = ctx.createOscillator();
        osc.type = 'square';
        osc.frequency.value = 880;
        osc.connect(ctx.destination);
        osc.start();
        osc.stop(ctx.currentTime + 0.12);
      }, 350);
    },
    stop() {
      if (timer !== null) {
        clearInterval(timer);
        timer = null;
      }
      if (osc) {
        try { osc.stop(); } catch { /* already stopped */ }
        osc = null;
      }
    },
  };
}
