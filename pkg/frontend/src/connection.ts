/**
 * Kiosk connection: sequenced, rate-limited teleop commands over one
 * socket. The transport is injectable so tests drive it without a server.
 */

import { ClientMessage, Message, ServerMessage, decode, encode } from './protocol.js';

export interface Transport {
  send(data: string): void;
  onmessage: ((data: string) => void) | null;
}

export const MAX_COMMANDS_PER_SECOND = 50;

export class KioskConnection {
  private seq = 0;
  private sendTimes: number[] = [];
  private handlers: Array<(msg: ServerMessage) => void> = [];

  constructor(private transport: Transport, private now: () => number = () => performance.now()) {
    transport.onmessage = (data) => {
      const msg = decode(data) as ServerMessage;
      for (const handler of this.handlers) handler(msg);
    };
  }

  onMessage(handler: (msg: ServerMessage) => void): void {
    this.handlers.push(handler);
  }

  send(msg: ClientMessage): void {
    this.transport.send(encode(msg));
  }

  /**
   * Send a leader command with a strictly increasing seq, throttled to
   * MAX_COMMANDS_PER_SECOND. Returns the seq used, or null when the
   * command was dropped by the throttle.
   */
  sendCommand(joints: number[]): number | null {
    const t = this.now();
    this.sendTimes = this.sendTimes.filter((s) => t - s < 1000);
    if (this.sendTimes.length >= MAX_COMMANDS_PER_SECOND) return null;
    this.sendTimes.push(t);
    this.seq += 1;
    this.send({ type: 'LeaderCommand', seq: this.seq, joints });
    return this.seq;
  }

  get lastSeq(): number {
    return this.seq;
  }
}

export function webSocketTransport(url: string): Transport {
  const ws = new WebSocket(url);
  const transport: Transport = {
    send: (data) => ws.send(data),
    onmessage: null,
  };
  ws.onmessage = (event: MessageEvent) => {
    if (transport.onmessage) transport.onmessage(String(event.data));
  };
  return transport;
}

export function messageOfType<T extends Message['type']>(
  msg: Message, type: T,
): Extract<Message, { type: T }> | null {
  return msg.type === type ? (msg as Extract<Message, { type: T }>) : null;
}
