import { ApiError, postChat } from "./api.js";
import { renderTranscript } from "./render.js";
import {
  AppState,
  beginTurn,
  completeTurn,
  failTurn,
  hasPendingTurn,
  initialState,
} from "./state.js";

// Server address: same origin by default, overridable via ?server=http://...
const params = new URLSearchParams(window.location.search);
const BASE_URL = params.get("server") ?? "";

let state: AppState = initialState();

const transcript = document.getElementById("transcript") as HTMLElement;
const form = document.getElementById("composer") as HTMLFormElement;
const input = document.getElementById("query-input") as HTMLInputElement;
const sendButton = document.getElementById("send-button") as HTMLButtonElement;

function sync(): void {
  transcript.innerHTML = renderTranscript(state);
  transcript.scrollTop = transcript.scrollHeight;
  const busy = hasPendingTurn(state);
  sendButton.disabled = busy || !input.value.trim();
  input.disabled = busy;
}

async function submit(): Promise<void> {
  const query = input.value;
  const next = beginTurn(state, query);
  if (next === state) return;
  state = next;
  input.value = "";
  sync();
  try {
    const resp = await postChat(BASE_URL, query);
    state = completeTurn(state, resp);
  } catch (e) {
    const msg = e instanceof ApiError ? e.message : "server unreachable";
    state = failTurn(state, msg);
  }
  sync();
}

form.addEventListener("submit", (ev) => {
  ev.preventDefault();
  void submit();
});
input.addEventListener("input", () => {
  sendButton.disabled = hasPendingTurn(state) || !input.value.trim();
});

sync();
