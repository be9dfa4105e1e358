/**
 * Wire protocol mirror of the kiosk service: one JSON object per frame,
 * protocol_version on every message. Canonical encodings must match the
 * server byte-for-byte (see docs/wire_test_vectors.jsonl in the repo root).
 */

export const PROTOCOL_VERSION = 1;

export interface CardTap { type: 'CardTap'; user_id: string }
export interface CreateUser { type: 'CreateUser'; nickname: string }
export interface ConsentGiven { type: 'ConsentGiven' }
export interface TutorialEvent { type: 'TutorialEvent'; ack: boolean }
export interface StartPlaying { type: 'StartPlaying' }
export interface SelectTask { type: 'SelectTask'; task_id: string }
export interface LeaderCommand { type: 'LeaderCommand'; seq: number; joints: number[] }
export interface StopEpisode { type: 'StopEpisode' }
export interface MarkResult { type: 'MarkResult'; success: boolean }
export interface SurveySubmit { type: 'SurveySubmit'; intuitive: number; interesting: number; wanted: number }
export interface LeaderboardOpen { type: 'LeaderboardOpen' }
export interface RequestHelp { type: 'RequestHelp' }
export interface Feedback { type: 'Feedback'; text: string }

export type ClientMessage =
  | CardTap | CreateUser | ConsentGiven | TutorialEvent | StartPlaying
  | SelectTask | LeaderCommand | StopEpisode | MarkResult | SurveySubmit
  | LeaderboardOpen | RequestHelp | Feedback;

export interface PageDirective { type: 'PageDirective'; page: string; payload: Record<string, unknown> }
export interface Telemetry {
  type: 'Telemetry'; tick: number; leader: number[]; follower: number[];
  collision: 'Clear' | 'Warning' | 'Violation'; min_clearance: number;
}
export interface CollisionAlarm { type: 'CollisionAlarm'; on: boolean }
export interface EpisodeClosed { type: 'EpisodeClosed'; termination: string; points_awarded: number }
export interface LeaderboardEntry { user_id: string; nickname: string; total_points: number; rank: number }
export interface LeaderboardData { type: 'LeaderboardData'; entries: LeaderboardEntry[] }
export interface TimerUpdate { type: 'TimerUpdate'; seconds_remaining: number }
export interface ErrorMessage { type: 'Error'; code: string; message: string }

export type ServerMessage =
  | PageDirective | Telemetry | CollisionAlarm | EpisodeClosed
  | LeaderboardData | TimerUpdate | ErrorMessage;

export type Message = ClientMessage | ServerMessage;

// field order per type; encoding follows it so bytes match the server
const FIELD_ORDER: Record<string, string[]> = {
  CardTap: ['user_id'],
  CreateUser: ['nickname'],
  ConsentGiven: [],
  TutorialEvent: ['ack'],
  StartPlaying: [],
  SelectTask: ['task_id'],
  LeaderCommand: ['seq', 'joints'],
  StopEpisode: [],
  MarkResult: ['success'],
  SurveySubmit: ['intuitive', 'interesting', 'wanted'],
  LeaderboardOpen: [],
  RequestHelp: [],
  Feedback: ['text'],
  PageDirective: ['page', 'payload'],
  Telemetry: ['tick', 'leader', 'follower', 'collision', 'min_clearance'],
  CollisionAlarm: ['on'],
  EpisodeClosed: ['termination', 'points_awarded'],
  LeaderboardData: ['entries'],
  TimerUpdate: ['seconds_remaining'],
  Error: ['code', 'message'],
};

// fields carrying floats: the service serializes float zero as "0.0", so
// these are formatted float-style for byte-exact interop with its vectors
const FLOAT_ARRAY_FIELDS = new Set(['joints', 'leader', 'follower']);
const FLOAT_FIELDS = new Set(['min_clearance']);

export class ProtocolError extends Error {
  constructor(public code: string, message: string) {
    super(`${code}: ${message}`);
  }
}

function floatStr(x: number): string {
  if (Number.isInteger(x)) {
    return Object.is(x, -0) ? '-0.0' : `${x}.0`;
  }
  return JSON.stringify(x);
}

export function encode(msg: Message): string {
  const order = FIELD_ORDER[msg.type];
  if (!order) throw new ProtocolError('UNSUPPORTED', `cannot encode ${msg.type}`);
  const parts = [`"protocol_version":${PROTOCOL_VERSION}`, `"type":${JSON.stringify(msg.type)}`];
  const record = msg as unknown as Record<string, unknown>;
  for (const field of order) {
    const value = record[field];
    let text: string;
    if (FLOAT_ARRAY_FIELDS.has(field)) {
      text = `[${(value as number[]).map(floatStr).join(',')}]`;
    } else if (FLOAT_FIELDS.has(field)) {
      text = floatStr(value as number);
    } else {
      text = JSON.stringify(value);
    }
    parts.push(`${JSON.stringify(field)}:${text}`);
  }
  return `{${parts.join(',')}}`;
}

export function decode(data: string): Message {
  let obj: Record<string, unknown>;
  try {
    obj = JSON.parse(data);
  } catch {
    throw new ProtocolError('MALFORMED', 'frame is not valid JSON');
  }
  if (obj === null || typeof obj !== 'object' || Array.isArray(obj)) {
    throw new ProtocolError('MALFORMED', 'frame must be a JSON object');
  }
  if (obj.protocol_version !== PROTOCOL_VERSION) {
    throw new ProtocolError('VERSION', `protocol_version ${obj.protocol_version}`);
  }
  const type = obj.type as string;
  const order = FIELD_ORDER[type];
  if (!order) {
    return { type: 'Error', code: 'UNSUPPORTED', message: `unknown message type ${type}` };
  }
  const declared = new Set(order.concat(['protocol_version', 'type']));
  for (const key of Object.keys(obj)) {
    if (!declared.has(key)) throw new ProtocolError('MALFORMED', `${type}: unexpected field ${key}`);
  }
  for (const field of order) {
    if (!(field in obj)) throw new ProtocolError('MALFORMED', `${type}: missing field ${field}`);
  }
  if (type === 'LeaderCommand') {
    const joints = obj.joints as number[];
    if (!Array.isArray(joints) || joints.length !== 14 || !joints.every(Number.isFinite)) {
      throw new ProtocolError('MALFORMED', 'LeaderCommand needs 14 finite joints');
    }
  }
  const { protocol_version: _v, ...rest } = obj;
  return rest as unknown as Message;
}
