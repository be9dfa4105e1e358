/**
 * Annotation screen: pick an episode, scrub the frame timeline, label
 * segments with an event tally, preview the derived quality live, and
 * commit. Runs against the service's HTTP surface on the same origin.
 */

import {
  AnnotationApi,
  EventTally,
  Segment,
  Timeline,
  defaultEvents,
  httpAnnotationApi,
  segmentColor,
} from './annotation.js';

interface TaskInfo { task_id: string; title: string }

export class AnnotationScreen {
  timeline: Timeline | null = null;
  episodeId: string | null = null;
  cursor = 0;
  markIn: number | null = null;
  private tasks: TaskInfo[] = [];

  constructor(private root: HTMLElement, private api: AnnotationApi) {}

  async start(): Promise<void> {
    const sceneResp = await fetch('/api/scene').then((r) => r.json()).catch(() => ({ tasks: [] }));
    this.tasks = (sceneResp.tasks ?? []) as TaskInfo[];
    await this.refreshList();
  }

  async refreshList(): Promise<void> {
    const episodes = await this.api.listEpisodes();
    this.root.innerHTML = '';
    const h = document.createElement('h1');
    h.textContent = 'Annotate episodes';
    this.root.append(h);
    const list = document.createElement('ul');
    list.id = 'episode-list';
    for (const e of episodes) {
      const item = document.createElement('li');
      const link = document.createElement('button');
      link.className = 'kiosk-button';
      link.dataset.episode = String(e.episode_id);
      link.textContent = `${e.episode_id} - ${e.task_id ?? 'tutorial/play'} - `
        + `${e.frames} frames${e.annotated ? ' (annotated)' : ''}`;
      link.addEventListener('click', () => this.open(String(e.episode_id), Number(e.frames)));
      item.append(link);
      list.append(item);
    }
    this.root.append(list);
  }

  open(episodeId: string, frameCount: number): void {
    this.episodeId = episodeId;
    this.timeline = new Timeline(frameCount);
    this.cursor = 0;
    this.markIn = null;
    this.renderEditor();
  }

  renderEditor(): void {
    const t = this.timeline;
    if (!t || !this.episodeId) return;
    this.root.innerHTML = '';
    const h = document.createElement('h1');
    h.textContent = `Annotating ${this.episodeId}`;
    this.root.append(h);

    const bar = document.createElement('canvas');
    bar.id = 'timeline-bar';
    bar.width = 600;
    bar.height = 48;
    this.root.append(bar);
    this.drawBar(bar);

    const scrubber = document.createElement('input');
    scrubber.type = 'range';
    scrubber.id = 'scrubber';
    scrubber.min = '0';
    scrubber.max = String(t.frameCount);
    scrubber.value = String(this.cursor);
    scrubber.addEventListener('input', () => {
      this.cursor = Number(scrubber.value);
      const label = this.root.querySelector('#cursor-label');
      if (label) label.textContent = `frame ${this.cursor}`;
    });
    this.root.append(scrubber);
    const cursorLabel = document.createElement('p');
    cursorLabel.id = 'cursor-label';
    cursorLabel.textContent = `frame ${this.cursor}`;
    this.root.append(cursorLabel);

    const markButton = document.createElement('button');
    markButton.id = 'mark-in';
    markButton.className = 'kiosk-button';
    markButton.textContent = 'Mark segment start here';
    markButton.addEventListener('click', () => {
      this.markIn = this.cursor;
      cursorLabel.textContent = `frame ${this.cursor} (segment start marked)`;
    });
    this.root.append(markButton);

    this.root.append(this.buildSegmentForm());

    const gaps = document.createElement('p');
    gaps.id = 'gaps';
    gaps.textContent = t.fullyCovered()
      ? 'full coverage'
      : `unlabeled: ${t.gaps().map(([a, b]) => `${a}..${b}`).join(', ')}`;
    this.root.append(gaps);

    const commitButton = document.createElement('button');
    commitButton.id = 'commit';
    commitButton.className = 'kiosk-button';
    commitButton.textContent = 'Commit labels';
    commitButton.disabled = !t.fullyCovered();
    commitButton.addEventListener('click', async () => {
      try {
        await this.api.commit(this.episodeId!, t.segments);
        await this.refreshList();
      } catch (err) {
        gaps.textContent = String(err);
      }
    });
    this.root.append(commitButton);
  }

  private buildSegmentForm(): HTMLElement {
    const form = document.createElement('div');
    form.id = 'segment-form';
    const labelSelect = document.createElement('select');
    labelSelect.id = 'label-select';
    for (const label of ['Play', 'Tutorial', 'Task']) {
      const opt = document.createElement('option');
      opt.value = label;
      opt.textContent = label;
      labelSelect.append(opt);
    }
    const taskSelect = document.createElement('select');
    taskSelect.id = 'task-select';
    for (const task of this.tasks) {
      const opt = document.createElement('option');
      opt.value = task.task_id;
      opt.textContent = task.title;
      taskSelect.append(opt);
    }
    form.append(labelSelect, taskSelect);

    const events = defaultEvents();
    form.append(this.numberField('retries', 'max retries per subtask', (v) => {
      events.max_retries_per_subtask = v;
    }));
    for (const key of ['smooth', 'slight_error', 'scene_change', 'opposite_arm', 'completed'] as const) {
      form.append(this.checkbox(key, events));
    }

    const preview = document.createElement('span');
    preview.id = 'quality-preview';
    preview.textContent = 'quality: ?';
    const previewButton = document.createElement('button');
    previewButton.id = 'preview';
    previewButton.textContent = 'Preview quality';
    previewButton.addEventListener('click', async () => {
      const label = labelSelect.value;
      const taskId = label === 'Task' ? taskSelect.value : null;
      const quality = await this.api.previewQuality(label, taskId, events);
      preview.textContent = `quality: Q${quality}`;
    });

    const apply = document.createElement('button');
    apply.id = 'apply-segment';
    apply.textContent = 'Label marked range to cursor';
    apply.addEventListener('click', async () => {
      if (this.markIn === null || this.markIn === this.cursor || !this.timeline) return;
      const [start, end] = this.markIn < this.cursor
        ? [this.markIn, this.cursor] : [this.cursor, this.markIn];
      const label = labelSelect.value as Segment['label'];
      const taskId = label === 'Task' ? taskSelect.value : null;
      const quality = await this.api.previewQuality(label, taskId, events);
      this.timeline.setSegment({
        start, end, label, task_id: taskId, quality, events: { ...events },
      });
      this.markIn = null;
      this.renderEditor();
    });

    form.append(previewButton, preview, apply);
    return form;
  }

  private numberField(id: string, text: string, onChange: (v: number) => void): HTMLElement {
    const row = document.createElement('label');
    row.append(document.createTextNode(text));
    const input = document.createElement('input');
    input.type = 'number';
    input.id = id;
    input.min = '0';
    input.value = '0';
    input.addEventListener('input', () => onChange(Number(input.value)));
    row.append(input);
    return row;
  }

  private checkbox(key: keyof EventTally, events: EventTally): HTMLElement {
    const row = document.createElement('label');
    const input = document.createElement('input');
    input.type = 'checkbox';
    input.id = `event-${key}`;
    input.checked = Boolean(events[key]);
    input.addEventListener('change', () => {
      (events[key] as boolean) = input.checked;
    });
    row.append(input, document.createTextNode(String(key)));
    return row;
  }

  private drawBar(canvas: HTMLCanvasElement): void {
    const ctx = canvas.getContext('2d');
    const t = this.timeline;
    if (!ctx || !t) return;
    ctx.fillStyle = '#1b1f29';
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    const scale = canvas.width / t.frameCount;
    for (const seg of t.segments) {
      ctx.fillStyle = segmentColor(seg);
      ctx.fillRect(seg.start * scale, 8, (seg.end - seg.start) * scale, 32);
    }
  }
}

if (typeof document !== 'undefined' && document.getElementById('annotator')) {
  const screen = new AnnotationScreen(
    document.getElementById('annotator') as HTMLElement,
    httpAnnotationApi(''),
  );
  void screen.start();
}
