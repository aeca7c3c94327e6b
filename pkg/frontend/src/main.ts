import { createDefaultStore } from "./chat.js";
import { wire } from "./view.js";

// Service base URL: same origin by default, ?api=http://host:port to override.
const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "";

const store = createDefaultStore(baseUrl, window.localStorage);

wire(store, {
  messages: document.getElementById("messages")!,
  input: document.getElementById("input") as HTMLInputElement,
  send: document.getElementById("send") as HTMLButtonElement,
  snapshotPane: document.getElementById("snapshot-pane")!,
});
