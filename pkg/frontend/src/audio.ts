// Ordered audio playback queue for base64-WAV frames.
//
// Clips play strictly in (utterance, index) order no matter how they arrive.
// Playback is gated behind an explicit enable() call (browser autoplay
// policies); clips that arrive before that are queued, not dropped.

export interface QueuedClip {
  utterance: number;
  index: number;
  wavB64: string;
  duration: number;
}

/** Plays one clip; resolves when playback finishes. */
export type ClipPlayer = (clip: QueuedClip) => Promise<void>;

export function browserClipPlayer(clip: QueuedClip): Promise<void> {
  return new Promise((resolve) => {
    const audio = new Audio(`data:audio/wav;base64,${clip.wavB64}`);
    audio.onended = () => resolve();
    audio.onerror = () => resolve(); // a broken clip must not stall the queue
    void audio.play().catch(() => resolve());
  });
}

export class AudioQueue {
  private queue: QueuedClip[] = [];
  private playing = false;
  private enabled = false;
  current: QueuedClip | null = null;
  onStart: ((clip: QueuedClip) => void) | null = null;
  onFinish: ((clip: QueuedClip) => void) | null = null;

  constructor(private play: ClipPlayer = browserClipPlayer) {}

  get isEnabled(): boolean {
    return this.enabled;
  }

  enable(): void {
    this.enabled = true;
    void this.drain();
  }

  enqueue(clip: QueuedClip): void {
    // sorted insertion keeps order even if frames ever arrive shuffled
    let at = this.queue.length;
    while (at > 0 && compare(this.queue[at - 1], clip) > 0) at--;
    this.queue.splice(at, 0, clip);
    void this.drain();
  }

  get pendingCount(): number {
    return this.queue.length;
  }

  private async drain(): Promise<void> {
    if (!this.enabled || this.playing) return;
    this.playing = true;
    try {
      while (this.queue.length > 0) {
        const clip = this.queue.shift()!;
        this.current = clip;
        this.onStart?.(clip);
        try {
          await this.play(clip);
        } catch {
          // a broken clip must not stall the rest of the queue
        }
        this.current = null;
        this.onFinish?.(clip);
      }
    } finally {
      this.current = null;
      this.playing = false;
    }
  }
}

function compare(a: QueuedClip, b: QueuedClip): number {
  return a.utterance - b.utterance || a.index - b.index;
}
