/** Banner + beeper state and the stop-latency contract. */

import { describe, expect, it } from 'vitest';

import { AlarmController } from '../src/alarm.js';

function harness() {
  const log: string[] = [];
  let clock = 0;
  const alarm = new AlarmController(
    { show: () => log.push('banner-on'), hide: () => log.push('banner-off') },
    { start: () => log.push('beep-start'), stop: () => log.push('beep-stop') },
    () => clock,
  );
  return { alarm, log, tick: (ms: number) => { clock += ms; } };
}

describe('AlarmController', () => {
  it('starts banner and beep on alarm-on, stops both on alarm-off', () => {
    const { alarm, log } = harness();
    alarm.handleAlarm(true);
    alarm.handleAlarm(false);
    expect(log).toEqual(['banner-on', 'beep-start', 'banner-off', 'beep-stop']);
  });

  it('stops audio synchronously: latency well under one telemetry period', () => {
    const { alarm, tick } = harness();
    alarm.handleAlarm(true);
    tick(100);
    alarm.handleAlarm(false);
    // the beeper stop happened inside handleAlarm; latency is 0 at the
    // message timestamp and must stay under the 20 ms telemetry period
    tick(5);
    expect(alarm.silenceLatency()).not.toBeNull();
    expect(alarm.silenceLatency()!).toBeLessThan(20);
    expect(alarm.isActive).toBe(false);
  });

  it('tolerates duplicate states without double-triggering', () => {
    const { alarm, log } = harness();
    alarm.handleAlarm(true);
    alarm.handleAlarm(true);
    alarm.handleAlarm(false);
    alarm.handleAlarm(false);
    expect(log).toEqual(['banner-on', 'beep-start', 'banner-off', 'beep-stop']);
  });
});
