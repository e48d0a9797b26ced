// Thin websocket wrapper with an injectable socket factory for tests.

import { ClientFrame, isServerFrame, ServerFrame } from './protocol';

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onopen: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export class ConsoleSocket {
  private socket: SocketLike | null = null;
  onFrame: ((frame: ServerFrame) => void) | null = null;
  onClose: (() => void) | null = null;

  constructor(
    private factory: SocketFactory = (url) => new WebSocket(url) as unknown as SocketLike,
  ) {}

  connect(url: string): void {
    this.socket = this.factory(url);
    this.socket.onmessage = (ev) => {
      let data: unknown;
      try {
        data = JSON.parse(ev.data);
      } catch {
        return;
      }
      if (isServerFrame(data)) this.onFrame?.(data);
    };
    this.socket.onclose = () => this.onClose?.();
  }

  send(frame: ClientFrame): void {
    this.socket?.send(JSON.stringify(frame));
  }

  sendStatement(text: string): void {
    this.send({ type: 'action', kind: 'statement', text });
  }

  sendChoice(task: 'vote' | 'night_action', action: string): void {
    this.send({ type: 'action', kind: task, action });
  }

  acknowledge(seq: number): void {
    this.send({ type: 'ack', seq });
  }

  close(): void {
    this.socket?.close();
  }
}

export function sessionUrl(base: string, session: string, seat: string | null): string {
  const ws = base.replace(/^http/, 'ws').replace(/\/$/, '');
  const suffix = seat !== null && seat !== '' ? `?seat=${encodeURIComponent(seat)}` : '';
  return `${ws}/sessions/${session}/ws${suffix}`;
}
