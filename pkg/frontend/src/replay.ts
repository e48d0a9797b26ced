// Replay mode: a read-only walk over a finished session record.
//
// The record's Public events are turned back into frames and fed through the
// same model reducer as live play, so seeking to position k always shows
// exactly what a spectator had seen after k events.

import { ClientSessionModel } from './model';
import { EventEnvelope, JoinedFrame, ServerFrame } from './protocol';

export interface SessionRecordJson {
  version: number;
  config: { player_names: string[] };
  events: { seq: number; t: number; visibility: unknown; payload: unknown }[];
  final_digest: string;
}

export function publicEvents(record: SessionRecordJson): EventEnvelope[] {
  return record.events.filter(
    (e) => e.visibility === 'public',
  ) as unknown as EventEnvelope[];
}

function syntheticJoined(record: SessionRecordJson): JoinedFrame {
  return {
    v: 1,
    type: 'joined',
    session: 'replay',
    player: null,
    snapshot: {
      status: 'replay',
      round: 1,
      phase: { kind: 'night', round: 1 },
      roster: record.config.player_names.map((name, id) => ({
        id,
        name,
        status: 'active',
      })),
      human_seats: [],
    },
  };
}

export class ReplayController {
  readonly events: EventEnvelope[];
  position = 0; // number of events applied
  playing = false;

  constructor(private record: SessionRecordJson) {
    this.events = publicEvents(record);
  }

  get length(): number {
    return this.events.length;
  }

  /** Model state after the first `position` public events. */
  modelAt(position: number): ClientSessionModel {
    const model = new ClientSessionModel();
    model.apply(syntheticJoined(this.record));
    const upto = Math.max(0, Math.min(position, this.events.length));
    for (let i = 0; i < upto; i++) {
      model.apply({ v: 1, type: 'event', event: this.events[i] } as ServerFrame);
    }
    this.position = upto;
    return model;
  }

  step(): ClientSessionModel {
    return this.modelAt(this.position + 1);
  }

  seek(position: number): ClientSessionModel {
    return this.modelAt(position);
  }

  pause(): void {
    this.playing = false;
  }
}
