// Client session model: rebuilt purely from received frames.
//
// No game logic lives here. Every displayed fact is either copied from a
// frame or derived from public elimination announcements; the test suite
// checks that property against synthetic frame logs.

import {
  ActionRequestPayload,
  EventEnvelope,
  PhaseInfo,
  RosterSnapshotEntry,
  ServerFrame,
} from './protocol';

export interface Utterance {
  utterance: number;
  player: number;
  chunks: string[]; // indexed by chunk index
  done: boolean;
  finalText: string | null;
}

export type TranscriptEntry =
  | { kind: 'utterance'; utterance: number }
  | { kind: 'info'; seq: number; text: string };

export interface PendingRequest {
  task: 'discuss' | 'vote' | 'night_action';
  options: string[];
  deadlineS: number | null;
  note: string | null;
  receivedAtMs: number;
}

export interface LastError {
  code: string;
  detail: string;
}

export class ClientSessionModel {
  session: string | null = null;
  me: number | null = null;
  myRole: string | null = null;
  fellowWerewolves: number[] = [];
  roster: RosterSnapshotEntry[] = [];
  phase: PhaseInfo | null = null;
  round = 0;
  status = 'connecting';
  transcript: TranscriptEntry[] = [];
  utterances = new Map<number, Utterance>();
  revelations: { target: number; role: string }[] = [];
  pending: PendingRequest | null = null;
  outcome: { winner: string; reason: string; final_round: number } | null = null;
  lastError: LastError | null = null;
  lastSeq = -1;

  nameOf(id: number): string {
    const entry = this.roster.find((r) => r.id === id);
    return entry ? entry.name : `#${id}`;
  }

  /** Apply one server frame; returns true when something displayable changed. */
  apply(frame: ServerFrame, nowMs = 0): boolean {
    switch (frame.type) {
      case 'joined':
        this.session = frame.session;
        this.me = frame.player;
        this.roster = frame.snapshot.roster.map((r) => ({ ...r }));
        this.phase = frame.snapshot.phase;
        this.round = frame.snapshot.round;
        this.status = frame.snapshot.status;
        return true;
      case 'event':
        this.lastSeq = frame.event.seq;
        this.applyEvent(frame.event, nowMs);
        return true;
      case 'error':
        this.lastError = { code: frame.code, detail: frame.detail };
        return true;
      case 'audio':
        return false; // audio frames go to the playback queue, not the model
      default:
        return false;
    }
  }

  private applyEvent(event: EventEnvelope, nowMs: number): void {
    const p = event.payload;
    switch (p.type) {
      case 'role_assignment': {
        if (p.player === this.me) {
          this.myRole = (p as { role: string }).role;
          this.fellowWerewolves = [
            ...((p as { fellow_werewolves?: number[] }).fellow_werewolves ?? []),
          ];
        }
        break;
      }
      case 'phase_change': {
        const phase = (p as { phase: PhaseInfo }).phase;
        this.phase = phase;
        if (phase.round > 0) this.round = phase.round;
        if (phase.kind === 'ended') this.status = 'ended';
        this.info(event.seq, describePhase(phase));
        break;
      }
      case 'statement_chunk': {
        const { player, utterance, index, text } = p as {
          player: number;
          utterance: number;
          index: number;
          text: string;
        };
        let entry = this.utterances.get(utterance);
        if (!entry) {
          entry = { utterance, player, chunks: [], done: false, finalText: null };
          this.utterances.set(utterance, entry);
          this.transcript.push({ kind: 'utterance', utterance });
        }
        entry.chunks[index] = text; // index slot keeps (utterance, index) order
        break;
      }
      case 'statement_done': {
        const { player, utterance, text } = p as {
          player: number;
          utterance: number;
          text: string;
        };
        let entry = this.utterances.get(utterance);
        if (!entry) {
          entry = { utterance, player, chunks: [], done: false, finalText: null };
          this.utterances.set(utterance, entry);
          this.transcript.push({ kind: 'utterance', utterance });
        }
        entry.done = true;
        entry.finalText = text;
        break;
      }
      case 'night_result': {
        const deaths = ((p as { deaths?: number[] }).deaths ?? []);
        for (const dead of deaths) this.markEliminated(dead);
        const reveal = (p as { reveal?: { target: number; role: string } }).reveal;
        if (reveal) {
          this.revelations.push({ ...reveal });
          this.info(event.seq, `You reveal: ${this.nameOf(reveal.target)} is a ${reveal.role}`);
        } else if (deaths.length > 0) {
          this.info(
            event.seq,
            `${deaths.map((d) => this.nameOf(d)).join(', ')} died at night`,
          );
        } else {
          this.info(event.seq, 'Nobody died at night');
        }
        break;
      }
      case 'vote_result': {
        const eliminated = (p as { eliminated: number | null }).eliminated;
        const counts = (p as { counts: Record<string, number> }).counts;
        const summary = Object.entries(counts)
          .map(([target, n]) => `${this.nameOf(Number(target))}: ${n}`)
          .join(', ');
        if (eliminated !== null) {
          this.markEliminated(eliminated);
          this.info(event.seq, `Vote (${summary}): ${this.nameOf(eliminated)} is out`);
        } else {
          this.info(event.seq, `Vote (${summary}): tie, nobody leaves`);
        }
        break;
      }
      case 'action_request': {
        const request = p as ActionRequestPayload;
        if (request.player === this.me) {
          this.pending = {
            task: request.task,
            options: [...request.options],
            deadlineS: request.deadline_s ?? null,
            note: request.note ?? null,
            receivedAtMs: nowMs,
          };
          this.lastError = null;
        }
        break;
      }
      case 'outcome': {
        this.outcome = { ...(p as { outcome: ClientSessionModel['outcome'] }).outcome! };
        this.pending = null;
        this.status = 'ended';
        break;
      }
      default:
        break;
    }
  }

  /** Called by the UI once an action frame has been sent. */
  actionSent(): void {
    this.pending = null;
  }

  orderedChunks(utterance: Utterance): string[] {
    const out: string[] = [];
    for (let i = 0; i < utterance.chunks.length; i++) {
      if (utterance.chunks[i] !== undefined) out.push(utterance.chunks[i]);
    }
    return out;
  }

  utteranceText(utterance: Utterance): string {
    if (utterance.done && utterance.finalText !== null) return utterance.finalText;
    return this.orderedChunks(utterance).join('');
  }

  remainingSeconds(nowMs: number): number | null {
    if (!this.pending || this.pending.deadlineS === null) return null;
    const elapsed = (nowMs - this.pending.receivedAtMs) / 1000;
    return Math.max(0, this.pending.deadlineS - elapsed);
  }

  private markEliminated(id: number): void {
    const entry = this.roster.find((r) => r.id === id);
    if (entry) entry.status = 'eliminated';
  }

  private info(seq: number, text: string): void {
    this.transcript.push({ kind: 'info', seq, text });
  }
}

export function describePhase(phase: PhaseInfo): string {
  if (phase.kind === 'ended') return 'Game over';
  if (phase.kind === 'night') return `Night ${phase.round}`;
  const stage = phase.stage === 'voting' ? 'voting' : 'discussion';
  return `Day ${phase.round} (${stage})`;
}
