// Console bootstrap: wire socket -> model -> render, audio -> queue.
//
// URL forms:
//   /?session=<id>&seat=<player id or name>   play a seat
//   /?session=<id>                            spectate live
//   /?replay=<url of a record JSON>           replay a finished session

import { AudioQueue } from './audio';
import { ClientSessionModel } from './model';
import { ReplayController, SessionRecordJson } from './replay';
import { render, UiHooks } from './ui';
import { ConsoleSocket, sessionUrl } from './ws';

const params = new URLSearchParams(window.location.search);
const model = new ClientSessionModel();
const audio = new AudioQueue();
const socket = new ConsoleSocket();

const hooks: UiHooks = {
  sendStatement(text: string) {
    socket.sendStatement(text);
    model.actionSent();
    draw();
  },
  sendChoice(task, action) {
    socket.sendChoice(task, action);
    model.actionSent();
    draw();
  },
  enableSound() {
    audio.enable();
    draw();
  },
};

function draw(): void {
  render(document, model, audio, hooks);
}

audio.onStart = draw; // speaker highlight follows the playing clip
audio.onFinish = draw;

function startLive(session: string, seat: string | null): void {
  socket.onFrame = (frame) => {
    if (frame.type === 'audio') {
      audio.enqueue({
        utterance: frame.utterance,
        index: frame.index,
        wavB64: frame.wav_b64,
        duration: frame.duration,
      });
      return;
    }
    model.apply(frame, Date.now());
    if (frame.type === 'event') socket.acknowledge(frame.event.seq);
    draw();
  };
  socket.onClose = () => {
    model.lastError = { code: 'disconnected', detail: 'connection closed' };
    draw();
  };
  socket.connect(sessionUrl(window.location.origin, session, seat));
  window.setInterval(draw, 1000); // keeps the countdown ticking
}

async function startReplay(url: string): Promise<void> {
  const response = await fetch(url);
  const record = (await response.json()) as SessionRecordJson;
  const controller = new ReplayController(record);
  const slider = document.getElementById('replay-slider') as HTMLInputElement;
  const controls = document.getElementById('replay-controls');
  controls?.classList.remove('hidden');
  slider.max = String(controller.length);
  slider.value = '0';

  const show = (position: number) => {
    const snapshot = controller.seek(position);
    render(document, snapshot, audio, hooks);
    slider.value = String(controller.position);
  };

  slider.oninput = () => show(Number(slider.value));
  const playButton = document.getElementById('replay-play');
  let timer: number | null = null;
  playButton?.addEventListener('click', () => {
    if (timer !== null) {
      window.clearInterval(timer);
      timer = null;
      playButton.textContent = 'Play';
      return;
    }
    playButton.textContent = 'Pause';
    timer = window.setInterval(() => {
      if (controller.position >= controller.length && timer !== null) {
        window.clearInterval(timer);
        timer = null;
        playButton.textContent = 'Play';
        return;
      }
      show(controller.position + 1);
    }, 700);
  });
  show(0);
}

const replayUrl = params.get('replay');
if (replayUrl) {
  void startReplay(replayUrl);
} else {
  const session = params.get('session');
  if (session) {
    startLive(session, params.get('seat'));
  } else {
    model.lastError = {
      code: 'no-session',
      detail: 'open /?session=<id>&seat=<player> or /?replay=<record url>',
    };
    draw();
  }
}
