// Projection of the capture session state machine onto the action buttons.
// "none" is the pre-session state of the capture screen (nothing initialized
// yet); the five remaining states come from the service verbatim.

export type SessionState = "initialized" | "recording" | "stopped" | "saved" | "discarded";
export type UiSessionState = SessionState | "none";
export type SessionAction = "initialize" | "start" | "stop" | "save" | "discard";

export const SESSION_STATES: SessionState[] = [
  "initialized",
  "recording",
  "stopped",
  "saved",
  "discarded",
];

export const ACTION_BUTTONS: SessionAction[] = ["initialize", "start", "stop", "save", "discard"];

const LEGAL: Record<UiSessionState, readonly SessionAction[]> = {
  none: ["initialize"],
  initialized: ["start"],
  recording: ["stop"],
  stopped: ["save", "discard"],
  saved: [],
  discarded: [],
};

export function enabledActions(state: UiSessionState): SessionAction[] {
  return [...(LEGAL[state] ?? [])];
}

export function isActionEnabled(state: UiSessionState, action: SessionAction): boolean {
  return enabledActions(state).includes(action);
}
