import { describe, expect, it, vi } from "vitest";

import { BusyError, UnknownRequestError } from "../src/api.js";
import { ChatStore, loadSessionId, replyText } from "../src/chat.js";
import type { ChatApi } from "../src/chat.js";
import type { AskReply } from "../src/types.js";

function reply(overrides: Partial<AskReply> = {}): AskReply {
  return {
    request_id: 1,
    answer_text: "yes",
    program_text: "exist class=apple",
    scene_version: "v1-s00000001",
    snapshot_link: "/snapshot/v1-s00000001",
    timing: { queue_ms: 1, parse_ms: 0.3, evaluate_ms: 0.1, total_ms: 3 },
    ...overrides,
  };
}

function fakeApi(overrides: Partial<ChatApi> = {}): ChatApi {
  return {
    ask: vi.fn(async () => reply()),
    feedback: vi.fn(async () => undefined),
    snapshot: vi.fn(async () => "<svg></svg>"),
    ...overrides,
  };
}

describe("replyText", () => {
  it("renders yes/no/count answers", () => {
    expect(replyText("yes")).toBe("Yes.");
    expect(replyText("no")).toBe("No.");
    expect(replyText("3")).toBe("You have 3.");
  });

  it("passes apologies through unchanged", () => {
    expect(replyText("sorry, i did not understand")).toBe("sorry, i did not understand");
  });
});

describe("sendQuestion", () => {
  it("pairs the user bubble with a fridge reply carrying timing", async () => {
    const store = new ChatStore(fakeApi(), "s1");
    await store.sendQuestion("any apples?");
    expect(store.messages).toHaveLength(2);
    const [user, fridge] = store.messages;
    expect(user.direction).toBe("user");
    expect(fridge.direction).toBe("fridge");
    expect(fridge.text).toBe("Yes.");
    expect(fridge.requestId).toBe(1);
    expect(fridge.timing?.total_ms).toBe(3);
    expect(fridge.apology).toBe(false);
  });

  it("ignores empty input", async () => {
    const api = fakeApi();
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("   ");
    expect(store.messages).toHaveLength(0);
    expect(api.ask).not.toHaveBeenCalled();
  });

  it("marks parse-failure replies as apologies with a snapshot link", async () => {
    const api = fakeApi({
      ask: vi.fn(async () =>
        reply({ answer_text: "sorry, i did not understand that question.", program_text: null }),
      ),
    });
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("zzzz?");
    const fridge = store.messages[1];
    expect(fridge.apology).toBe(true);
    expect(fridge.snapshotLink).toBe("/snapshot/v1-s00000001");
  });

  it("shows a busy notice on 429", async () => {
    const api = fakeApi({ ask: vi.fn(async () => { throw new BusyError(); }) });
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("milk?");
    expect(store.messages[1].direction).toBe("notice");
    expect(store.messages[1].text).toMatch(/busy/);
    expect(store.messages[1].retryText).toBeUndefined();
  });

  it("offers a retry on network failure and retry re-sends", async () => {
    let fail = true;
    const api = fakeApi({
      ask: vi.fn(async () => {
        if (fail) throw new TypeError("fetch failed");
        return reply();
      }),
    });
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("milk?");
    const notice = store.messages[1];
    expect(notice.direction).toBe("notice");
    expect(notice.retryText).toBe("milk?");
    fail = false;
    await store.retry(notice.id);
    expect(store.messages).toHaveLength(4);
    expect(store.messages[3].direction).toBe("fridge");
  });

  it("enforces the in-flight limit of one", async () => {
    let release!: () => void;
    const gate = new Promise<void>((resolve) => (release = resolve));
    const api = fakeApi({
      ask: vi.fn(async () => {
        await gate;
        return reply();
      }),
    });
    const store = new ChatStore(api, "s1");
    const first = store.sendQuestion("milk?");
    expect(store.busy).toBe(true);
    expect(store.canSend("eggs?")).toBe(false);
    await store.sendQuestion("eggs?"); // dropped while busy
    release();
    await first;
    expect(api.ask).toHaveBeenCalledTimes(1);
    expect(store.messages).toHaveLength(2);
    expect(store.busy).toBe(false);
  });

  it("keeps every user bubble paired across a mixed session", async () => {
    let n = 0;
    const api = fakeApi({
      ask: vi.fn(async () => {
        n++;
        if (n === 2) throw new BusyError();
        return reply({ request_id: n });
      }),
    });
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("one?");
    await store.sendQuestion("two?");
    await store.sendQuestion("three?");
    const users = store.messages.filter((m) => m.direction === "user");
    const repliesAndNotices = store.messages.filter((m) => m.direction !== "user");
    expect(users).toHaveLength(3);
    expect(repliesAndNotices).toHaveLength(3);
    for (let i = 0; i < store.messages.length; i += 2) {
      expect(store.messages[i].direction).toBe("user");
      expect(store.messages[i + 1].direction).not.toBe("user");
    }
  });
});

describe("react", () => {
  it("pins the reaction after a 204", async () => {
    const api = fakeApi();
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("any apples?");
    const fridge = store.messages[1];
    expect(store.canReact(fridge.id)).toBe(true);
    await store.react(fridge.id, "like");
    expect(fridge.reaction).toBe("like");
    expect(api.feedback).toHaveBeenCalledWith(1, "like");
  });

  it("is idempotent for the same reaction", async () => {
    const api = fakeApi();
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("any apples?");
    const fridge = store.messages[1];
    await store.react(fridge.id, "like");
    await store.react(fridge.id, "like");
    expect(api.feedback).toHaveBeenCalledTimes(1);
  });

  it("clears the reaction with a notice on 404", async () => {
    const api = fakeApi({
      feedback: vi.fn(async () => { throw new UnknownRequestError(1); }),
    });
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("any apples?");
    const fridge = store.messages[1];
    await store.react(fridge.id, "like");
    expect(fridge.reaction).toBeUndefined();
    expect(store.messages.at(-1)?.direction).toBe("notice");
  });

  it("cannot react to user bubbles", async () => {
    const api = fakeApi();
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("any apples?");
    const user = store.messages[0];
    expect(store.canReact(user.id)).toBe(false);
    await store.react(user.id, "like");
    expect(api.feedback).not.toHaveBeenCalled();
  });
});

describe("snapshot pane", () => {
  it("shows the fetched schematic", async () => {
    const store = new ChatStore(fakeApi(), "s1");
    await store.sendQuestion("any apples?");
    await store.showSnapshot(store.messages[1].id);
    expect(store.snapshotPane?.svg).toBe("<svg></svg>");
    expect(store.snapshotPane?.sceneVersion).toBe("v1-s00000001");
    store.hideSnapshot();
    expect(store.snapshotPane).toBeNull();
  });

  it("keeps a placeholder for expired versions", async () => {
    const api = fakeApi({ snapshot: vi.fn(async () => null) });
    const store = new ChatStore(api, "s1");
    await store.sendQuestion("any apples?");
    await store.showSnapshot(store.messages[1].id);
    expect(store.snapshotPane?.svg).toBeNull();
  });
});

describe("session persistence", () => {
  it("creates a session id once and reuses it", () => {
    const backing = new Map<string, string>();
    const storage = {
      getItem: (k: string) => backing.get(k) ?? null,
      setItem: (k: string, v: string) => void backing.set(k, v),
    };
    const first = loadSessionId(storage);
    const second = loadSessionId(storage);
    expect(first).toBe(second);
    expect(first).toMatch(/^web-/);
  });
});
