/**
 * Annotation interface model: a frame timeline with labeled segments,
 * live quality preview from the server, and commit. The segment editing
 * mirrors the service semantics: a new segment replaces whatever part of
 * older segments it overlaps, so the timeline never overlaps itself.
 */

export interface EventTally {
  max_retries_per_subtask: number;
  smooth: boolean;
  slight_error: boolean;
  scene_change: boolean;
  opposite_arm: boolean;
  completed: boolean;
}

export function defaultEvents(): EventTally {
  return {
    max_retries_per_subtask: 0,
    smooth: true,
    slight_error: false,
    scene_change: false,
    opposite_arm: false,
    completed: false,
  };
}

export interface Segment {
  start: number; // inclusive frame index
  end: number; // exclusive
  label: 'Play' | 'Tutorial' | 'Task';
  task_id: string | null;
  quality: number;
  events: EventTally;
}

export class Timeline {
  segments: Segment[] = [];

  constructor(public frameCount: number) {}

  /** Label [start, end), truncating or splitting overlapped segments. */
  setSegment(seg: Segment): void {
    if (!(0 <= seg.start && seg.start < seg.end && seg.end <= this.frameCount)) {
      throw new Error(`segment [${seg.start},${seg.end}) out of range`);
    }
    const kept: Segment[] = [];
    for (const s of this.segments) {
      if (s.end <= seg.start || s.start >= seg.end) {
        kept.push(s);
        continue;
      }
      if (s.start < seg.start) kept.push({ ...s, end: seg.start });
      if (s.end > seg.end) kept.push({ ...s, start: seg.end });
    }
    kept.push({ ...seg });
    kept.sort((a, b) => a.start - b.start);
    this.segments = kept;
  }

  /** Drag one boundary of an existing segment to a new frame. */
  resize(index: number, edge: 'start' | 'end', frame: number): void {
    const seg = this.segments[index];
    if (!seg) return;
    const next = { ...seg, [edge]: frame } as Segment;
    if (next.start >= next.end) return; // refuse to invert
    this.segments.splice(index, 1);
    this.setSegment(next);
  }

  gaps(): Array<[number, number]> {
    const out: Array<[number, number]> = [];
    let cursor = 0;
    for (const s of this.segments) {
      if (s.start > cursor) out.push([cursor, s.start]);
      cursor = Math.max(cursor, s.end);
    }
    if (cursor < this.frameCount) out.push([cursor, this.frameCount]);
    return out;
  }

  fullyCovered(): boolean {
    return this.gaps().length === 0;
  }
}

export interface AnnotationApi {
  listEpisodes(): Promise<Array<Record<string, unknown>>>;
  fetchEpisode(id: string): Promise<Record<string, unknown>>;
  previewQuality(label: string, taskId: string | null, events: EventTally): Promise<number>;
  commit(id: string, segments: Segment[]): Promise<void>;
}

export function httpAnnotationApi(baseUrl: string, fetcher: typeof fetch = fetch): AnnotationApi {
  return {
    async listEpisodes() {
      const r = await fetcher(`${baseUrl}/api/episodes`);
      const body = (await r.json()) as { episodes: Array<Record<string, unknown>> };
      return body.episodes;
    },
    async fetchEpisode(id) {
      const r = await fetcher(`${baseUrl}/api/episodes/${id}`);
      if (!r.ok) throw new Error(`episode ${id}: ${r.status}`);
      return (await r.json()) as Record<string, unknown>;
    },
    async previewQuality(label, taskId, events) {
      const r = await fetcher(`${baseUrl}/api/quality-preview`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ label, task_id: taskId, events }),
      });
      const body = (await r.json()) as { quality: number };
      return body.quality;
    },
    async commit(id, segments) {
      const r = await fetcher(`${baseUrl}/api/episodes/${id}/annotation`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({
          segments: segments.map((s) => ({
            start: s.start,
            end: s.end,
            label: s.label,
            task_id: s.task_id,
            events: s.events,
          })),
        }),
      });
      if (!r.ok) {
        const detail = await r.text();
        throw new Error(`commit rejected: ${detail}`);
      }
    },
  };
}

export const QUALITY_COLORS: Record<string, string> = {
  'Play/0': '#9e9e9e',
  'Tutorial/1': '#8bb9dd',
  'Tutorial/2': '#4f8fc9',
  'Task/1': '#e3c04b',
  'Task/2': '#dd8b3c',
  'Task/3': '#c9513f',
};

export function segmentColor(seg: Segment): string {
  return QUALITY_COLORS[`${seg.label}/${seg.quality}`] ?? '#666';
}
