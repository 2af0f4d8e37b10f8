// Wire types of the capture service API (snake_case mirrors the JSON bodies).

export interface Language {
  id: number;
  name: string;
}

export interface SignItem {
  id: number;
  name: string;
  language_id: number;
  category: string;
  recording_count?: number;
}

export interface Performer {
  id: number;
  name: string;
  age: number;
  phone: string;
}

export interface RecordingEntry {
  id: number;
  folder_path: string;
  performer_id: number;
  item_id: number;
  frame_count: number;
}

export interface StatsRow {
  category: string;
  description: string;
  defined_item_count: number;
  recording_count: number;
}

export interface ApiSessionState {
  id: string;
  state: string;
  frames_written: number;
  item: string;
  performer: string;
  language: string;
  elapsed_ms: number;
  recording_id: number | null;
}

export interface PreviewJoint {
  name: string;
  x: number;
  y: number;
  tracking_state: string;
}

export interface PreviewSkeleton {
  body_index: number;
  joints: PreviewJoint[];
}

export interface PreviewMessage {
  frame_index: number;
  timestamp_ms: number;
  color_png_b64: string;
  depth_png_b64: string;
  skeletons: PreviewSkeleton[];
}

export const CATEGORIES = [
  "cat1",
  "cat2",
  "cat3",
  "cat4",
  "cat5",
  "cat6",
  "cat7",
  "cat8",
] as const;

export type Category = (typeof CATEGORIES)[number];
