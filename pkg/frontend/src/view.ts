import type { ChatStore } from "./chat.js";
import type { ChatMessage, Reaction } from "./types.js";

const REACTIONS: Array<{ value: Reaction; label: string }> = [
  { value: "like", label: "👍" },
  { value: "dislike", label: "👎" },
  { value: "emoji:heart", label: "❤️" },
  { value: "emoji:joy", label: "😂" },
];

export interface ViewElements {
  messages: HTMLElement;
  input: HTMLInputElement | HTMLTextAreaElement;
  send: HTMLButtonElement;
  snapshotPane: HTMLElement;
}

function bubbleFor(store: ChatStore, message: ChatMessage): HTMLElement {
  const el = document.createElement("div");
  el.className = `msg ${message.direction}${message.apology ? " apology" : ""}`;
  el.dataset.id = String(message.id);

  const text = document.createElement("div");
  text.className = "text";
  text.textContent = message.text;
  el.appendChild(text);

  if (message.direction === "fridge") {
    const meta = document.createElement("div");
    meta.className = "meta";
    if (message.timing) {
      const latency = document.createElement("span");
      latency.className = "latency";
      latency.textContent = `${message.timing.total_ms.toFixed(0)} ms`;
      meta.appendChild(latency);
    }
    if (message.snapshotLink) {
      const link = document.createElement("a");
      link.className = "snapshot-link";
      link.href = "#";
      link.textContent = "view snapshot";
      link.addEventListener("click", (event) => {
        event.preventDefault();
        void store.showSnapshot(message.id);
      });
      meta.appendChild(link);
    }
    el.appendChild(meta);

    const reactions = document.createElement("div");
    reactions.className = "reactions";
    for (const { value, label } of REACTIONS) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "reaction" + (message.reaction === value ? " pinned" : "");
      button.dataset.reaction = value;
      button.textContent = label;
      button.disabled = !store.canReact(message.id);
      button.addEventListener("click", () => void store.react(message.id, value));
      reactions.appendChild(button);
    }
    el.appendChild(reactions);
  }

  if (message.direction === "notice" && message.retryText) {
    const retry = document.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "retry";
    retry.addEventListener("click", () => void store.retry(message.id));
    el.appendChild(retry);
  }
  return el;
}

export function render(store: ChatStore, elements: ViewElements): void {
  elements.messages.replaceChildren(...store.messages.map((m) => bubbleFor(store, m)));
  elements.messages.scrollTop = elements.messages.scrollHeight;
  elements.send.disabled = !store.canSend(elements.input.value);

  const pane = elements.snapshotPane;
  if (!store.snapshotPane) {
    pane.hidden = true;
    pane.replaceChildren();
    return;
  }
  pane.hidden = false;
  const title = document.createElement("div");
  title.className = "pane-title";
  title.textContent = `snapshot ${store.snapshotPane.sceneVersion}`;
  const close = document.createElement("button");
  close.type = "button";
  close.className = "close";
  close.textContent = "×";
  close.addEventListener("click", () => store.hideSnapshot());
  title.appendChild(close);
  const body = document.createElement("div");
  body.className = "pane-body";
  if (store.snapshotPane.svg === null) {
    body.textContent = "snapshot no longer available";
  } else {
    body.innerHTML = store.snapshotPane.svg;
  }
  pane.replaceChildren(title, body);
}

export function wire(store: ChatStore, elements: ViewElements): void {
  store.subscribe(() => render(store, elements));

  const submit = () => {
    const text = elements.input.value;
    if (!store.canSend(text)) return;
    elements.input.value = "";
    void store.sendQuestion(text);
  };
  elements.send.addEventListener("click", submit);
  elements.input.addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") {
      event.preventDefault();
      submit();
    }
  });
  elements.input.addEventListener("input", () => {
    elements.send.disabled = !store.canSend(elements.input.value);
  });
  render(store, elements);
}
