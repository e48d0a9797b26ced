// DOM rendering. Everything drawn here comes out of the model; the only
// inputs back into the system are the action form and the sound gate.

import { AudioQueue } from './audio';
import { ClientSessionModel, describePhase } from './model';

export interface UiHooks {
  sendStatement(text: string): void;
  sendChoice(task: 'vote' | 'night_action', action: string): void;
  enableSound(): void;
}

export function render(
  root: Document,
  model: ClientSessionModel,
  audio: AudioQueue,
  hooks: UiHooks,
): void {
  renderHeader(root, model);
  renderRoleCard(root, model);
  renderRoster(root, model, audio);
  renderTranscript(root, model);
  renderActionForm(root, model, hooks);
  renderOutcome(root, model);
  renderError(root, model);
  renderSoundGate(root, audio, hooks);
}

function el(root: Document, id: string): HTMLElement {
  const node = root.getElementById(id);
  if (!node) throw new Error(`missing #${id} in console markup`);
  return node;
}

function renderHeader(root: Document, model: ClientSessionModel): void {
  el(root, 'phase').textContent = model.phase
    ? describePhase(model.phase)
    : 'connecting…';
  el(root, 'session-label').textContent = model.session
    ? `session ${model.session}`
    : '';
}

function renderRoleCard(root: Document, model: ClientSessionModel): void {
  const card = el(root, 'role-card');
  if (model.me === null) {
    card.textContent = 'Spectating';
    return;
  }
  if (!model.myRole) {
    card.textContent = 'Waiting for your role…';
    return;
  }
  let text = `You are ${model.nameOf(model.me)} — ${model.myRole.toUpperCase()}`;
  if (model.fellowWerewolves.length > 0) {
    const pack = model.fellowWerewolves.map((id) => model.nameOf(id)).join(', ');
    text += ` (pack: ${pack})`;
  }
  card.textContent = text;
  card.dataset.role = model.myRole;
}

function renderRoster(
  root: Document,
  model: ClientSessionModel,
  audio: AudioQueue,
): void {
  const list = el(root, 'roster');
  list.textContent = '';
  const speakingPlayer =
    audio.current !== null
      ? model.utterances.get(audio.current.utterance)?.player ?? null
      : null;
  for (const entry of model.roster) {
    const item = root.createElement('li');
    item.textContent = entry.name;
    item.className = entry.status;
    if (entry.id === model.me) item.classList.add('me');
    if (entry.id === speakingPlayer) item.classList.add('speaking');
    list.appendChild(item);
  }
}

function renderTranscript(root: Document, model: ClientSessionModel): void {
  const pane = el(root, 'transcript');
  pane.textContent = '';
  for (const entry of model.transcript) {
    if (entry.kind === 'info') {
      const line = root.createElement('div');
      line.className = 'info-line';
      line.textContent = entry.text;
      pane.appendChild(line);
    } else {
      const utterance = model.utterances.get(entry.utterance);
      if (!utterance) continue;
      const bubble = root.createElement('div');
      bubble.className = 'bubble';
      if (utterance.player === model.me) bubble.classList.add('mine');
      const who = root.createElement('span');
      who.className = 'speaker';
      who.textContent = model.nameOf(utterance.player);
      const text = root.createElement('span');
      text.className = 'words';
      text.textContent = model.utteranceText(utterance);
      if (!utterance.done) bubble.classList.add('streaming');
      bubble.appendChild(who);
      bubble.appendChild(text);
      pane.appendChild(bubble);
    }
  }
  pane.scrollTop = pane.scrollHeight;
}

function renderActionForm(
  root: Document,
  model: ClientSessionModel,
  hooks: UiHooks,
): void {
  const form = el(root, 'action-form');
  form.textContent = '';
  const pending = model.pending;
  if (!pending) {
    form.classList.add('hidden');
    return;
  }
  form.classList.remove('hidden');

  const heading = root.createElement('div');
  heading.className = 'prompt';
  heading.textContent =
    pending.task === 'discuss'
      ? 'Your turn to speak'
      : pending.task === 'vote'
        ? 'Cast your vote'
        : 'Choose your night action';
  form.appendChild(heading);

  if (pending.note) {
    const note = root.createElement('div');
    note.className = 'note';
    note.textContent = pending.note;
    form.appendChild(note);
  }

  const remaining = model.remainingSeconds(Date.now());
  if (remaining !== null) {
    const countdown = root.createElement('div');
    countdown.className = 'countdown';
    countdown.id = 'countdown';
    countdown.textContent = `${Math.ceil(remaining)}s`;
    form.appendChild(countdown);
  }

  if (pending.task === 'discuss') {
    const input = root.createElement('textarea') as HTMLTextAreaElement;
    input.id = 'statement-input';
    input.placeholder = 'Say something to the table…';
    const button = root.createElement('button');
    button.textContent = 'Speak';
    button.onclick = () => {
      if (input.value.trim()) hooks.sendStatement(input.value.trim());
    };
    form.appendChild(input);
    form.appendChild(button);
  } else {
    // the server's options are the only legal moves; never computed locally
    for (const option of pending.options) {
      const button = root.createElement('button');
      button.className = 'option';
      button.textContent = option;
      button.onclick = () =>
        hooks.sendChoice(pending.task as 'vote' | 'night_action', option);
      form.appendChild(button);
    }
  }
}

function renderOutcome(root: Document, model: ClientSessionModel): void {
  const banner = el(root, 'outcome');
  if (!model.outcome) {
    banner.classList.add('hidden');
    return;
  }
  banner.classList.remove('hidden');
  const { winner, reason, final_round } = model.outcome;
  banner.textContent = `${winner.toUpperCase()} win — ${reason.replace(/_/g, ' ')} (round ${final_round})`;
}

function renderError(root: Document, model: ClientSessionModel): void {
  const banner = el(root, 'error-banner');
  if (!model.lastError) {
    banner.classList.add('hidden');
    return;
  }
  banner.classList.remove('hidden');
  banner.textContent = `${model.lastError.code}: ${model.lastError.detail}`;
}

function renderSoundGate(root: Document, audio: AudioQueue, hooks: UiHooks): void {
  const gate = el(root, 'sound-gate');
  if (audio.isEnabled) {
    gate.classList.add('hidden');
    return;
  }
  gate.classList.remove('hidden');
  gate.onclick = () => hooks.enableSound();
}
