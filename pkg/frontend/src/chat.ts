import { BusyError, FridgeApi, UnknownRequestError } from "./api.js";
import type { AskReply, ChatMessage, Reaction } from "./types.js";

export interface ChatApi {
  ask(sessionId: string, text: string): Promise<AskReply>;
  feedback(requestId: number, reaction: Reaction): Promise<void>;
  snapshot(link: string): Promise<string | null>;
}

export interface SnapshotPane {
  sceneVersion: string;
  svg: string | null; // null renders the "snapshot expired" placeholder
}

/** Formats the service's terse answer into a chat reply. */
export function replyText(answer: string): string {
  if (answer === "yes") return "Yes.";
  if (answer === "no") return "No.";
  if (/^\d+$/.test(answer)) return `You have ${answer}.`;
  return answer; // apologies and anything else pass through
}

/**
 * Conversation state machine, DOM-free for testability.
 *
 * Invariants: every user bubble is followed by exactly one fridge bubble
 * or one notice; at most maxInFlight questions are awaiting replies; no
 * answer text is fabricated client-side.
 */
export class ChatStore {
  messages: ChatMessage[] = [];
  snapshotPane: SnapshotPane | null = null;
  private nextId = 1;
  private inFlight = 0;
  private listeners: Array<() => void> = [];

  constructor(
    private api: ChatApi,
    public sessionId: string,
    private maxInFlight: number = 1,
  ) {}

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  private push(message: Omit<ChatMessage, "id">): ChatMessage {
    const withId = { ...message, id: this.nextId++ };
    this.messages.push(withId);
    this.notify();
    return withId;
  }

  canSend(text: string): boolean {
    return text.trim().length > 0 && this.inFlight < this.maxInFlight;
  }

  get busy(): boolean {
    return this.inFlight >= this.maxInFlight;
  }

  async sendQuestion(text: string): Promise<void> {
    const trimmed = text.trim();
    if (!this.canSend(trimmed)) return;
    this.inFlight++;
    this.push({ direction: "user", text: trimmed });
    try {
      const reply = await this.api.ask(this.sessionId, trimmed);
      this.push({
        direction: "fridge",
        text: replyText(reply.answer_text),
        requestId: reply.request_id,
        timing: reply.timing,
        snapshotLink: reply.snapshot_link,
        sceneVersion: reply.scene_version,
        apology: reply.program_text === null,
      });
    } catch (err) {
      if (err instanceof BusyError) {
        this.push({ direction: "notice", text: "The fridge is busy, try again in a moment." });
      } else {
        this.push({
          direction: "notice",
          text: "Could not reach the fridge.",
          retryText: trimmed,
        });
      }
    } finally {
      this.inFlight--;
      this.notify();
    }
  }

  /** Re-sends the question attached to a failed-delivery notice. */
  async retry(noticeId: number): Promise<void> {
    const notice = this.messages.find((m) => m.id === noticeId);
    if (!notice?.retryText) return;
    await this.sendQuestion(notice.retryText);
  }

  canReact(messageId: number): boolean {
    const message = this.messages.find((m) => m.id === messageId);
    return message?.direction === "fridge" && message.requestId !== undefined;
  }

  async react(messageId: number, reaction: Reaction): Promise<void> {
    const message = this.messages.find((m) => m.id === messageId);
    if (!message || message.direction !== "fridge" || message.requestId === undefined) return;
    if (message.reaction === reaction) return; // idempotent double-click
    const previous = message.reaction;
    message.reaction = reaction;
    this.notify();
    try {
      await this.api.feedback(message.requestId, reaction);
    } catch (err) {
      message.reaction = previous;
      if (err instanceof UnknownRequestError) {
        this.push({ direction: "notice", text: "That reply is gone; reaction not recorded." });
      } else {
        this.push({ direction: "notice", text: "Could not record the reaction." });
      }
    }
  }

  async showSnapshot(messageId: number): Promise<void> {
    const message = this.messages.find((m) => m.id === messageId);
    if (!message?.snapshotLink || !message.sceneVersion) return;
    const svg = await this.api.snapshot(message.snapshotLink);
    this.snapshotPane = { sceneVersion: message.sceneVersion, svg };
    this.notify();
  }

  hideSnapshot(): void {
    this.snapshotPane = null;
    this.notify();
  }
}

export function randomSessionId(): string {
  return `web-${Math.random().toString(36).slice(2, 10)}`;
}

export function loadSessionId(storage: Pick<Storage, "getItem" | "setItem">): string {
  const existing = storage.getItem("fridgeqa-session");
  if (existing) return existing;
  const fresh = randomSessionId();
  storage.setItem("fridgeqa-session", fresh);
  return fresh;
}

export function createDefaultStore(baseUrl: string, storage: Storage): ChatStore {
  return new ChatStore(new FridgeApi(baseUrl), loadSessionId(storage));
}
