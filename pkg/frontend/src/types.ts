// Wire types for the fridgeqa service API.

export interface Timing {
  queue_ms: number;
  parse_ms: number;
  evaluate_ms: number;
  total_ms: number;
}

export interface AskReply {
  request_id: number;
  answer_text: string;
  program_text: string | null;
  scene_version: string;
  snapshot_link: string;
  timing: Timing;
}

export type Reaction = "like" | "dislike" | `emoji:${string}`;

export type Direction = "user" | "fridge" | "notice";

export interface ChatMessage {
  id: number;
  direction: Direction;
  text: string;
  requestId?: number;
  timing?: Timing;
  snapshotLink?: string;
  sceneVersion?: string;
  apology?: boolean;
  reaction?: Reaction;
  retryText?: string;
}
