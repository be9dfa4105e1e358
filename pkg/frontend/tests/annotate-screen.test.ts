// @vitest-environment jsdom
/** The annotation screen: list, scrub, label, preview, commit gating. */

import { beforeEach, describe, expect, it, vi } from 'vitest';

import { AnnotationApi, Segment } from '../src/annotation.js';
import { AnnotationScreen } from '../src/annotate-main.js';

function fakeApi(): AnnotationApi & { committed: Segment[][] } {
  const api = {
    committed: [] as Segment[][],
    listEpisodes: vi.fn(async () => [
      { episode_id: 'ep-000001', task_id: null, frames: 100, annotated: false },
      { episode_id: 'ep-000002', task_id: 'hi_chew', frames: 200, annotated: true },
    ]),
    fetchEpisode: vi.fn(async () => ({})),
    previewQuality: vi.fn(async (label: string) => (label === 'Play' ? 0 : 3)),
    commit: vi.fn(async (_id: string, segments: Segment[]) => {
      api.committed.push(segments);
    }),
  };
  return api;
}

describe('AnnotationScreen', () => {
  beforeEach(() => {
    document.body.innerHTML = '<main id="annotator"></main>';
    vi.stubGlobal('fetch', vi.fn(async () => new Response(JSON.stringify({
      tasks: [{ task_id: 'hi_chew', title: 'Pick up Hi-Chew' }],
    }))));
    // jsdom has no canvas 2d context
    (HTMLCanvasElement.prototype as unknown as { getContext: () => null }).getContext = () => null;
  });

  it('lists episodes and opens the editor', async () => {
    const api = fakeApi();
    const screen = new AnnotationScreen(document.getElementById('annotator')!, api);
    await screen.start();
    const buttons = document.querySelectorAll('#episode-list button');
    expect(buttons.length).toBe(2);
    expect(buttons[1].textContent).toContain('(annotated)');
    (buttons[0] as HTMLButtonElement).click();
    expect(document.querySelector('#scrubber')).toBeTruthy();
    expect(document.querySelector('#commit')).toBeTruthy();
  });

  it('labels a scrubbed range and gates commit on coverage', async () => {
    const api = fakeApi();
    const screen = new AnnotationScreen(document.getElementById('annotator')!, api);
    await screen.start();
    screen.open('ep-000001', 100);

    // mark 0, scrub to 60, apply a Play segment
    (document.querySelector('#mark-in') as HTMLButtonElement).click();
    const scrubber = document.querySelector('#scrubber') as HTMLInputElement;
    scrubber.value = '60';
    scrubber.dispatchEvent(new Event('input'));
    (document.querySelector('#apply-segment') as HTMLButtonElement).click();
    await vi.waitFor(() => {
      expect(screen.timeline!.segments.length).toBe(1);
    });
    expect(screen.timeline!.segments[0]).toMatchObject({ start: 0, end: 60, label: 'Play', quality: 0 });

    // commit is disabled until the whole episode is covered
    expect((document.querySelector('#commit') as HTMLButtonElement).disabled).toBe(true);
    expect(document.querySelector('#gaps')!.textContent).toContain('60..100');

    (document.querySelector('#mark-in') as HTMLButtonElement).click(); // mark at 60
    scrubber.value = '100';
    scrubber.dispatchEvent(new Event('input'));
    (document.querySelector('#apply-segment') as HTMLButtonElement).click();
    await vi.waitFor(() => {
      expect(screen.timeline!.segments.length).toBe(2);
    });
    const commitBtn = document.querySelector('#commit') as HTMLButtonElement;
    expect(commitBtn.disabled).toBe(false);
    commitBtn.click();
    await vi.waitFor(() => expect(api.committed.length).toBe(1));
    expect(api.committed[0].length).toBe(2);
  });

  it('previews the derived quality for the current tally', async () => {
    const api = fakeApi();
    const screen = new AnnotationScreen(document.getElementById('annotator')!, api);
    await screen.start();
    screen.open('ep-000001', 50);
    (document.querySelector('#label-select') as HTMLSelectElement).value = 'Task';
    (document.querySelector('#preview') as HTMLButtonElement).click();
    await vi.waitFor(() => {
      expect(document.querySelector('#quality-preview')!.textContent).toBe('quality: Q3');
    });
    expect(api.previewQuality).toHaveBeenCalledWith('Task', 'hi_chew', expect.any(Object));
  });
});
