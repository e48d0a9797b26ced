import { describe, expect, it } from 'vitest';

import { ServerFrame } from '../src/protocol';
import { ConsoleSocket, sessionUrl, SocketLike } from '../src/ws';

class FakeSocket implements SocketLike {
  sent: string[] = [];
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: (() => void) | null = null;
  onopen: (() => void) | null = null;
  closed = false;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  push(frame: unknown): void {
    this.onmessage?.({ data: JSON.stringify(frame) });
  }

  pushRaw(data: string): void {
    this.onmessage?.({ data });
  }
}

function connected() {
  const fake = new FakeSocket();
  const socket = new ConsoleSocket(() => fake);
  const frames: ServerFrame[] = [];
  socket.onFrame = (f) => frames.push(f);
  socket.connect('ws://example/sessions/x/ws');
  return { fake, socket, frames };
}

describe('ConsoleSocket', () => {
  it('parses server frames and ignores junk', () => {
    const { fake, frames } = connected();
    fake.push({ v: 1, type: 'error', code: 'x', detail: 'y' });
    fake.pushRaw('not json at all');
    fake.push({ some: 'other shape' });
    expect(frames).toHaveLength(1);
    expect(frames[0].type).toBe('error');
  });

  it('serializes statement and choice actions per protocol', () => {
    const { fake, socket } = connected();
    socket.sendStatement('hello there');
    socket.sendChoice('vote', 'VOTE P3');
    socket.acknowledge(17);
    expect(JSON.parse(fake.sent[0])).toEqual({
      type: 'action', kind: 'statement', text: 'hello there',
    });
    expect(JSON.parse(fake.sent[1])).toEqual({
      type: 'action', kind: 'vote', action: 'VOTE P3',
    });
    expect(JSON.parse(fake.sent[2])).toEqual({ type: 'ack', seq: 17 });
  });

  it('reports closure', () => {
    const { fake, socket } = connected();
    let closed = false;
    socket.onClose = () => (closed = true);
    fake.close();
    expect(closed).toBe(true);
  });
});

describe('sessionUrl', () => {
  it('builds ws urls with and without a seat', () => {
    expect(sessionUrl('http://host:1', 'abc', '3')).toBe(
      'ws://host:1/sessions/abc/ws?seat=3',
    );
    expect(sessionUrl('https://host', 'abc', null)).toBe(
      'wss://host/sessions/abc/ws',
    );
    expect(sessionUrl('http://host', 'abc', 'Nova Reyes')).toBe(
      'ws://host/sessions/abc/ws?seat=Nova%20Reyes',
    );
  });
});
