import type { AskReply, Reaction } from "./types.js";

export class BusyError extends Error {
  constructor() {
    super("the fridge is busy, try again in a moment");
  }
}

export class UnknownRequestError extends Error {
  constructor(requestId: number) {
    super(`request ${requestId} is unknown to the service`);
  }
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class FridgeApi {
  constructor(private baseUrl: string = "") {}

  async ask(sessionId: string, text: string): Promise<AskReply> {
    const response = await fetch(`${this.baseUrl}/ask`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, text }),
    });
    if (response.status === 429) throw new BusyError();
    if (!response.ok) throw new ApiError(response.status, `ask failed (${response.status})`);
    return (await response.json()) as AskReply;
  }

  async feedback(requestId: number, reaction: Reaction): Promise<void> {
    const response = await fetch(`${this.baseUrl}/feedback`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ request_id: requestId, reaction }),
    });
    if (response.status === 404) throw new UnknownRequestError(requestId);
    if (!response.ok) throw new ApiError(response.status, `feedback failed (${response.status})`);
  }

  /** Fetches the schematic SVG; null marks an expired/unknown version. */
  async snapshot(link: string): Promise<string | null> {
    const response = await fetch(`${this.baseUrl}${link}`);
    if (response.status === 404) return null;
    if (!response.ok) throw new ApiError(response.status, `snapshot failed (${response.status})`);
    return await response.text();
  }
}
