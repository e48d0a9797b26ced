import { describe, expect, it } from 'vitest';

import { AudioQueue, QueuedClip } from '../src/audio';

function clip(utterance: number, index: number): QueuedClip {
  return { utterance, index, wavB64: '', duration: 0.01 };
}

function instrumented() {
  const played: [number, number][] = [];
  let release: (() => void) | null = null;
  const queue = new AudioQueue(async (c) => {
    played.push([c.utterance, c.index]);
    await new Promise<void>((resolve) => {
      release = resolve;
      setTimeout(resolve, 0); // auto-advance unless a test holds playback
    });
  });
  return { queue, played, holdRelease: () => release };
}

const flush = () => new Promise((resolve) => setTimeout(resolve, 25));

describe('AudioQueue', () => {
  it('plays nothing until sound is enabled', async () => {
    const { queue, played } = instrumented();
    queue.enqueue(clip(0, 0));
    await flush();
    expect(played).toEqual([]);
    expect(queue.pendingCount).toBe(1);
    queue.enable();
    await flush();
    expect(played).toEqual([[0, 0]]);
  });

  it('pending clips play in (utterance, index) order even when enqueued shuffled', async () => {
    const { queue, played } = instrumented();
    // gate closed: everything queues, nothing starts early
    for (const [u, i] of [[2, 0], [0, 1], [1, 0], [0, 0], [2, 1], [0, 2]] as const) {
      queue.enqueue(clip(u, i));
    }
    queue.enable();
    await flush();
    expect(played).toEqual([[0, 0], [0, 1], [0, 2], [1, 0], [2, 0], [2, 1]]);
  });

  it('in-order arrival (the live protocol) plays in order while streaming', async () => {
    const { queue, played } = instrumented();
    queue.enable();
    for (const [u, i] of [[0, 0], [0, 1], [1, 0], [2, 0]] as const) {
      queue.enqueue(clip(u, i));
      await flush();
    }
    expect(played).toEqual([[0, 0], [0, 1], [1, 0], [2, 0]]);
  });

  it('exposes the currently playing clip for speaker highlighting', async () => {
    const starts: [number, number][] = [];
    const queue = new AudioQueue(async (c) => {
      starts.push([c.utterance, c.index]);
      expect(queue.current).toEqual(c);
    });
    queue.onStart = (c) => expect(queue.current).toEqual(c);
    queue.enable();
    queue.enqueue(clip(0, 0));
    queue.enqueue(clip(0, 1));
    await flush();
    expect(starts.length).toBe(2);
    expect(queue.current).toBeNull();
  });

  it('keeps draining after a clip player rejects', async () => {
    const played: number[] = [];
    const queue = new AudioQueue(async (c) => {
      if (c.index === 0) throw new Error('decoder blew up');
      played.push(c.index);
    });
    queue.enable();
    queue.enqueue(clip(0, 0));
    queue.enqueue(clip(0, 1));
    queue.enqueue(clip(0, 2));
    await flush();
    expect(played).toEqual([1, 2]);
  });
});
