// Frame and event types mirroring docs/protocol.md (wire protocol v1).

export type Visibility = 'public' | 'system' | ['private', number];

export interface PhaseInfo {
  kind: 'night' | 'day' | 'ended';
  round: number;
  stage?: 'discussion' | 'voting';
}

export interface PhaseChangePayload {
  type: 'phase_change';
  phase: PhaseInfo;
}

export interface StatementChunkPayload {
  type: 'statement_chunk';
  player: number;
  utterance: number;
  index: number;
  text: string;
}

export interface StatementDonePayload {
  type: 'statement_done';
  player: number;
  utterance: number;
  text: string;
}

export interface NightResultPayload {
  type: 'night_result';
  round: number;
  deaths: number[];
  reveal?: { target: number; role: string };
}

export interface VoteResultPayload {
  type: 'vote_result';
  round: number;
  votes: Record<string, number>;
  counts: Record<string, number>;
  eliminated: number | null;
  tie: boolean;
}

export interface RoleAssignmentPayload {
  type: 'role_assignment';
  player: number;
  role: string;
  fellow_werewolves?: number[];
}

export interface ActionRequestPayload {
  type: 'action_request';
  player: number;
  task: 'discuss' | 'vote' | 'night_action';
  options: string[];
  deadline_s?: number;
  note?: string;
}

export interface OutcomePayload {
  type: 'outcome';
  outcome: { winner: string; reason: string; final_round: number };
}

export type EventPayload =
  | PhaseChangePayload
  | StatementChunkPayload
  | StatementDonePayload
  | NightResultPayload
  | VoteResultPayload
  | RoleAssignmentPayload
  | ActionRequestPayload
  | OutcomePayload
  | { type: string; [key: string]: unknown };

export interface EventEnvelope {
  seq: number;
  t: number;
  visibility: Visibility;
  payload: EventPayload;
}

export interface RosterSnapshotEntry {
  id: number;
  name: string;
  status: 'active' | 'eliminated';
}

export interface SessionSnapshot {
  status: string;
  round: number;
  phase: PhaseInfo;
  roster: RosterSnapshotEntry[];
  human_seats: number[];
}

export interface JoinedFrame {
  v: 1;
  type: 'joined';
  session: string;
  player: number | null;
  snapshot: SessionSnapshot;
}

export interface EventFrame {
  v: 1;
  type: 'event';
  event: EventEnvelope;
}

export interface AudioFrame {
  v: 1;
  type: 'audio';
  utterance: number;
  index: number;
  sample_rate: number;
  duration: number;
  wav_b64: string;
}

export interface ErrorFrame {
  v: 1;
  type: 'error';
  code: string;
  detail: string;
}

export type ServerFrame = JoinedFrame | EventFrame | AudioFrame | ErrorFrame;

export interface StatementAction {
  type: 'action';
  kind: 'statement';
  text: string;
}

export interface ChoiceAction {
  type: 'action';
  kind: 'vote' | 'night_action';
  action: string;
}

export type ClientFrame = StatementAction | ChoiceAction | { type: 'ack'; seq: number };

export function isServerFrame(data: unknown): data is ServerFrame {
  if (typeof data !== 'object' || data === null) return false;
  const t = (data as { type?: unknown }).type;
  return t === 'joined' || t === 'event' || t === 'audio' || t === 'error';
}
