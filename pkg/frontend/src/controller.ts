import type { ApiClient } from "./api.js";
import { enabledActions, type SessionAction, type UiSessionState } from "./stateMachine.js";
import type { ApiSessionState } from "./types.js";

export class IllegalActionError extends Error {
  constructor(action: SessionAction, state: UiSessionState) {
    super(`action ${action} is not legal in state ${state}`);
    this.name = "IllegalActionError";
  }
}

/**
 * Capture-screen logic, kept free of the DOM: owns the session handle for one
 * item, enforces the state machine client-side and forwards legal actions to
 * the API. The view layer renders `enabled()` directly onto the buttons, so
 * button enablement and dispatch legality can never drift apart.
 */
export class CaptureController {
  session: ApiSessionState | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly itemId: number,
  ) {}

  get state(): UiSessionState {
    return (this.session?.state as UiSessionState) ?? "none";
  }

  enabled(): SessionAction[] {
    return enabledActions(this.state);
  }

  async dispatch(action: SessionAction, performerId?: number): Promise<ApiSessionState> {
    if (!this.enabled().includes(action)) {
      throw new IllegalActionError(action, this.state);
    }
    if (action === "initialize") {
      if (performerId === undefined) {
        throw new Error("initialize requires a performer");
      }
      this.session = await this.api.createSession(this.itemId, performerId);
    } else {
      if (!this.session) throw new IllegalActionError(action, "none");
      this.session = await this.api.sessionAction(this.session.id, action);
    }
    return this.session;
  }

  async refresh(): Promise<ApiSessionState | null> {
    if (this.session) {
      this.session = await this.api.getSession(this.session.id);
    }
    return this.session;
  }

  /** Poll until the recorder has written at least `minimum` frames. */
  async waitForFrames(minimum: number, timeoutMs = 20_000, pollMs = 50): Promise<ApiSessionState> {
    const deadline = Date.now() + timeoutMs;
    while (Date.now() < deadline) {
      const state = await this.refresh();
      if (state && state.frames_written >= minimum) return state;
      await new Promise((resolve) => setTimeout(resolve, pollMs));
    }
    throw new Error(`session never reached ${minimum} frames`);
  }
}
