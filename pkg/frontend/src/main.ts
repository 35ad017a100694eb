/** App bootstrap: session, stream and user input wiring. */

import { createSession, debugChunk, EventStream, postMessage, putChunk } from "./api.js";
import type { DebugMode, EventFrame } from "./protocol.js";
import { Transcript } from "./transcript.js";
import { renderTranscript, setBanner, type ViewHandlers } from "./view.js";

async function boot(): Promise<void> {
  const transcriptBox = document.getElementById("transcript") as HTMLElement;
  const input = document.getElementById("composer-input") as HTMLInputElement;
  const sendButton = document.getElementById("composer-send") as HTMLButtonElement;
  const banner = document.getElementById("banner") as HTMLElement;
  const toast = document.getElementById("toast") as HTMLElement;

  const sessionId = await createSession();
  const transcript = new Transcript();

  const showToast = (text: string) => {
    toast.textContent = text;
    toast.hidden = false;
    setTimeout(() => {
      toast.hidden = true;
    }, 2500);
  };

  const handlers: ViewHandlers = {
    onChipClick: (label) => {
      input.value = label; // insert, never auto-send
      input.focus();
    },
    onChunkSave: (chunkId, source) => {
      putChunk(sessionId, chunkId, source).catch(() => {
        showToast("Edit rejected - chunk unchanged");
        redraw();
      });
    },
    onDebug: (chunkId, mode: DebugMode, ideas?) => {
      debugChunk(sessionId, chunkId, mode, ideas).catch((error: Error) => {
        showToast(error.message === "busy" ? "Still working on the last request" : "Debug failed");
      });
    },
  };

  const redraw = () => renderTranscript(transcriptBox, transcript.derive(), handlers);

  const stream = new EventStream(sessionId, {
    onFrame: (frame: EventFrame) => {
      transcript.ingest(frame);
      redraw();
    },
    onStatus: (connected) => setBanner(banner, connected),
  });
  stream.connect();

  const send = async () => {
    const text = input.value.trim();
    if (!text) return;
    try {
      await postMessage(sessionId, text);
      transcript.addUserMessage(text);
      input.value = "";
      redraw();
    } catch (error) {
      showToast((error as Error).message === "busy" ? "Still working - try again shortly" : "Send failed");
    }
  };

  sendButton.addEventListener("click", () => void send());
  input.addEventListener("keydown", (event: KeyboardEvent) => {
    if (event.key === "Enter") void send();
  });
}

void boot();
