/**
 * Page rendering. The client is stateless about flow: it renders whatever
 * page the last PageDirective named and never navigates on its own. Every
 * button only emits a client message.
 */

import { KioskConnection } from './connection.js';
import { LeaderboardEntry, PageDirective } from './protocol.js';

type Payload = Record<string, unknown>;

export interface PageContext {
  connection: KioskConnection;
  root: HTMLElement;
}

export class PageRouter {
  current = '';

  constructor(private ctx: PageContext) {}

  handleDirective(directive: PageDirective): void {
    this.current = directive.page;
    const render = RENDERERS[directive.page] ?? renderUnknown;
    this.ctx.root.innerHTML = '';
    render(this.ctx, directive.payload, this.ctx.root);
    this.ctx.root.dataset.page = directive.page;
  }
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, text = '', cls = '',
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text) node.textContent = text;
  if (cls) node.className = cls;
  return node;
}

function button(label: string, id: string, onClick: () => void): HTMLButtonElement {
  const b = el('button', label, 'kiosk-button');
  b.id = id;
  b.addEventListener('click', onClick);
  return b;
}

function renderIdle(ctx: PageContext, _p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'Tap your ID card to begin'));
  const field = el('input') as HTMLInputElement;
  field.id = 'card-id';
  field.placeholder = 'card id';
  const tap = button('Tap card', 'tap-card', () => {
    if (field.value) ctx.connection.send({ type: 'CardTap', user_id: field.value });
  });
  root.append(field, tap);
}

function renderSignIn(ctx: PageContext, p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'Create your profile'));
  root.append(el('p', `card: ${p.user_id ?? ''}`));
  const field = el('input') as HTMLInputElement;
  field.id = 'nickname';
  field.placeholder = 'nickname';
  root.append(field, button('Continue', 'create-user', () => {
    if (field.value) ctx.connection.send({ type: 'CreateUser', nickname: field.value });
  }));
}

function renderConsent(ctx: PageContext, p: Payload, root: HTMLElement): void {
  root.append(el('h1', `Welcome, ${p.nickname ?? ''}`));
  root.append(el('p', 'Interaction data is recorded for research. Episodes store '
    + 'robot joint state only. Press Agree to continue.'));
  root.append(button('Agree', 'consent', () => ctx.connection.send({ type: 'ConsentGiven' })));
}

function renderMain(ctx: PageContext, p: Payload, root: HTMLElement): void {
  root.append(el('h1', `Hi ${p.nickname ?? ''}!`));
  root.append(el('p', `points: ${p.points ?? 0}`, 'points'));
  if (!p.tutorial_completed) {
    root.append(el('p', 'Finish the interactive tutorial to start playing.', 'hint'));
  }
  root.append(
    button('Start Playing', 'start-playing', () => ctx.connection.send({ type: 'StartPlaying' })),
    button(p.tutorial_completed ? 'Redo Tutorial' : 'Interactive Tutorial', 'tutorial',
      () => ctx.connection.send({ type: 'TutorialEvent', ack: true })),
    button('Leaderboard', 'leaderboard', () => ctx.connection.send({ type: 'LeaderboardOpen' })),
    button('Request Help', 'request-help', () => ctx.connection.send({ type: 'RequestHelp' })),
  );
  const feedback = el('textarea') as HTMLTextAreaElement;
  feedback.id = 'feedback-text';
  feedback.placeholder = 'tell us something...';
  root.append(feedback, button('Give Feedback', 'feedback', () => {
    ctx.connection.send({ type: 'Feedback', text: feedback.value });
  }));
}

const TUTORIAL_HINTS: Record<string, string> = {
  WaitHome: 'Wait while the arms rise to their home position.',
  SqueezeToStart: 'Squeeze both leader grippers closed to start puppeteering.',
  TouchTable: 'Gently touch the left and right arms to the table.',
  RestOnStop: 'Rest the leader grippers in the grooves of the mechanical stops.',
  DoneVideo: 'All done! Watch the short video, then continue.',
};

function renderTutorial(ctx: PageContext, p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'Interactive Tutorial'));
  const stage = String(p.stage ?? 'WaitHome');
  const steps = el('div', '', 'tutorial-steps');
  for (const [i, name] of Object.keys(TUTORIAL_HINTS).entries()) {
    const step = el('div', `${i + 1}. ${name}`, 'tutorial-step');
    if (name === stage) step.classList.add('active');
    steps.append(step);
  }
  root.append(steps);
  root.append(el('p', TUTORIAL_HINTS[stage] ?? '', 'hint'));
  if (stage === 'TouchTable') {
    root.append(el('p', `left ${p.left_done ? 'done' : 'pending'}, right ${p.right_done ? 'done' : 'pending'}`));
  }
  if (stage === 'DoneVideo') {
    root.append(el('div', '[ tutorial video placeholder ]', 'video-placeholder'));
    root.append(button('Continue', 'tutorial-done', () => ctx.connection.send({ type: 'TutorialEvent', ack: true })));
  }
  root.append(el('canvas', '', 'schematic') as HTMLCanvasElement);
}

function renderTaskPage(ctx: PageContext, p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'Pick a task'));
  const tasks = (p.tasks ?? []) as Array<Record<string, unknown>>;
  const grid = el('div', '', 'task-grid');
  for (const task of tasks) {
    const card = el('div', '', 'task-card');
    card.append(el('div', '[ preview ]', 'task-preview'));
    card.append(el('h2', String(task.title)));
    card.append(el('p', `${task.difficulty} - ${task.points_on_success} points`));
    card.append(el('p', `reward: ${task.reward}`));
    card.addEventListener('click', () =>
      ctx.connection.send({ type: 'SelectTask', task_id: String(task.task_id) }));
    card.dataset.taskId = String(task.task_id);
    grid.append(card);
  }
  root.append(grid);
  root.append(button('Back', 'back', () => ctx.connection.send({ type: 'TutorialEvent', ack: true })));
}

function renderTaskDetail(ctx: PageContext, p: Payload, root: HTMLElement): void {
  const task = (p.task ?? {}) as Record<string, unknown>;
  root.append(el('h1', String(task.title ?? '')));
  root.append(el('p', `${task.difficulty} - ${task.points_on_success} points for a success`));
  const subtasks = (task.subtasks ?? []) as string[];
  if (subtasks.length) {
    const list = el('ol', '', 'subtasks');
    for (const s of subtasks) list.append(el('li', s));
    root.append(list);
  }
  root.append(el('p', `countdown: ${p.timer_seconds}s per attempt`));
  root.append(
    button('Begin', 'begin-demo', () => ctx.connection.send({ type: 'StartPlaying' })),
    button('Back', 'back', () => ctx.connection.send({ type: 'TutorialEvent', ack: true })),
  );
}

const SLIDER_NAMES = ['waist', 'shoulder', 'elbow', 'roll', 'pitch', 'wrist', 'grip'];

function renderTeleop(ctx: PageContext, p: Payload, root: HTMLElement): void {
  root.append(el('h1', `Demonstrating: ${p.task_id}`));
  const timer = el('div', `${p.timer_seconds}s`, 'countdown');
  timer.id = 'countdown';
  root.append(timer);
  const canvas = el('canvas', '', 'schematic') as HTMLCanvasElement;
  canvas.id = 'teleop-canvas';
  canvas.width = 560;
  canvas.height = 420;
  root.append(canvas);
  // one slider per leader value; main.ts wires them to the command stream
  const home = (p.home_pose as number[]) ?? new Array(14).fill(0);
  const controls = el('div', '', 'joint-controls');
  for (const [arm, offset] of [['left', 0], ['right', 7]] as Array<[string, number]>) {
    const column = el('div', '', 'joint-column');
    column.append(el('h3', `${arm} arm`));
    for (let j = 0; j < 7; j++) {
      const index = offset + j;
      const row = el('label', '', 'joint-row');
      row.append(el('span', SLIDER_NAMES[j]));
      const slider = el('input') as HTMLInputElement;
      slider.type = 'range';
      slider.className = 'joint-slider';
      slider.dataset.joint = String(index);
      slider.min = j === 6 ? '0' : '-3.14';
      slider.max = j === 6 ? '1' : '3.14';
      slider.step = '0.01';
      slider.value = String(home[index] ?? 0);
      row.append(slider);
      column.append(row);
    }
    controls.append(column);
  }
  root.append(controls);
  root.append(el('p', 'keys: qa ws ed rf tg (left) / uj ik ol p; [\' (right)', 'hint'));
  root.append(button('Stop', 'stop-episode', () => ctx.connection.send({ type: 'StopEpisode' })));
}

function renderResultMark(ctx: PageContext, p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'How did it go?'));
  root.append(el('p', `episode ${p.episode_id} ended (${p.termination})`));
  root.append(
    button('Success', 'mark-success', () => ctx.connection.send({ type: 'MarkResult', success: true })),
    button('Failure', 'mark-failure', () => ctx.connection.send({ type: 'MarkResult', success: false })),
  );
}

function renderSurvey(ctx: PageContext, _p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'Quick survey'));
  const questions: Array<[string, string]> = [
    ['intuitive', 'Controlling the robot was intuitive'],
    ['interesting', 'Controlling the robot was fun and interesting'],
    ['wanted', 'The robot accomplished the task in the way that I wanted'],
  ];
  const values: Record<string, number> = { intuitive: 3, interesting: 3, wanted: 3 };
  for (const [key, text] of questions) {
    const row = el('div', '', 'likert-row');
    row.append(el('span', text));
    for (let v = 1; v <= 5; v++) {
      const b = button(String(v), `${key}-${v}`, () => {
        values[key] = v;
        row.querySelectorAll('button').forEach((x) => x.classList.remove('selected'));
        b.classList.add('selected');
      });
      if (v === 3) b.classList.add('selected');
      row.append(b);
    }
    root.append(row);
  }
  root.append(button('Submit', 'survey-submit', () => ctx.connection.send({
    type: 'SurveySubmit',
    intuitive: values.intuitive,
    interesting: values.interesting,
    wanted: values.wanted,
  })));
}

function renderLeaderboard(ctx: PageContext, _p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'Leaderboard'));
  const table = el('table', '', 'leaderboard');
  table.id = 'leaderboard-table';
  root.append(table);
  root.append(button('Back', 'back', () => ctx.connection.send({ type: 'TutorialEvent', ack: true })));
}

export function fillLeaderboard(root: HTMLElement, entries: LeaderboardEntry[]): void {
  const table = root.querySelector('#leaderboard-table');
  if (!table) return;
  table.innerHTML = '';
  for (const e of entries) {
    const row = document.createElement('tr');
    row.innerHTML = `<td>#${e.rank}</td><td>${e.nickname}</td><td>${e.total_points}</td>`;
    table.append(row);
  }
}

function renderRequestHelp(ctx: PageContext, _p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'Help is on the way'));
  root.append(el('p', 'The study team has been notified.'));
  root.append(button('Back', 'back', () => ctx.connection.send({ type: 'TutorialEvent', ack: true })));
}

function renderFeedback(ctx: PageContext, _p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'Thanks for the feedback!'));
  root.append(button('Back', 'back', () => ctx.connection.send({ type: 'TutorialEvent', ack: true })));
}

function renderUnknown(_ctx: PageContext, _p: Payload, root: HTMLElement): void {
  root.append(el('h1', 'Unknown page'));
}

const RENDERERS: Record<string, (ctx: PageContext, p: Payload, root: HTMLElement) => void> = {
  Idle: renderIdle,
  SignInNewUser: renderSignIn,
  Consent: renderConsent,
  Main: renderMain,
  Tutorial: renderTutorial,
  TaskPage: renderTaskPage,
  TaskDetail: renderTaskDetail,
  Teleop: renderTeleop,
  ResultMark: renderResultMark,
  Survey: renderSurvey,
  Leaderboard: renderLeaderboard,
  RequestHelp: renderRequestHelp,
  Feedback: renderFeedback,
};
