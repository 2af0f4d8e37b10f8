import type { PreviewMessage } from "./types.js";

export const JOINTS_PER_BODY = 25;

// Native sizes of the preview payloads and of the depth image the skeleton
// coordinates live in.
export const COLOR_THUMB = { width: 480, height: 270 };
export const DEPTH_THUMB = { width: 256, height: 212 };
export const DEPTH_IMAGE = { width: 512, height: 424 };

export function colorDataUrl(message: PreviewMessage): string {
  return `data:image/png;base64,${message.color_png_b64}`;
}

export function depthDataUrl(message: PreviewMessage): string {
  return `data:image/png;base64,${message.depth_png_b64}`;
}

/** Total joints carried by a message; always a multiple of 25. */
export function totalJointCount(message: PreviewMessage): number {
  const count = message.skeletons.reduce((sum, s) => sum + s.joints.length, 0);
  if (count % JOINTS_PER_BODY !== 0) {
    throw new Error(`malformed preview message: ${count} joints is not a multiple of 25`);
  }
  return count;
}

export interface OverlayPoint {
  x: number;
  y: number;
  bodyIndex: number;
  name: string;
}

/**
 * Skeleton joints scaled from depth-image coordinates onto a target surface
 * (by default the depth thumbnail). Out-of-frame joints are kept; the canvas
 * clips them.
 */
export function overlayPoints(
  message: PreviewMessage,
  targetWidth = DEPTH_THUMB.width,
  targetHeight = DEPTH_THUMB.height,
): OverlayPoint[] {
  totalJointCount(message); // reject malformed messages before drawing
  const scaleX = targetWidth / DEPTH_IMAGE.width;
  const scaleY = targetHeight / DEPTH_IMAGE.height;
  return message.skeletons.flatMap((skeleton) =>
    skeleton.joints.map((joint) => ({
      x: joint.x * scaleX,
      y: joint.y * scaleY,
      bodyIndex: skeleton.body_index,
      name: joint.name,
    })),
  );
}

const BODY_OVERLAY_COLORS = ["#ff5252", "#4caf50", "#536dfe", "#ffc107", "#d500f9", "#00bcd4"];

export function drawOverlay(canvas: HTMLCanvasElement, message: PreviewMessage): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (const point of overlayPoints(message, canvas.width, canvas.height)) {
    ctx.fillStyle = BODY_OVERLAY_COLORS[point.bodyIndex % BODY_OVERLAY_COLORS.length];
    ctx.beginPath();
    ctx.arc(point.x, point.y, 2.4, 0, Math.PI * 2);
    ctx.fill();
  }
}

/** Live preview connection; reconnects are the caller's concern. */
export class PreviewStream {
  private socket: WebSocket | null = null;

  constructor(private readonly url: string) {}

  connect(onMessage: (message: PreviewMessage) => void, onClose?: () => void): void {
    this.socket = new WebSocket(this.url);
    this.socket.onmessage = (event) => onMessage(JSON.parse(event.data) as PreviewMessage);
    if (onClose) this.socket.onclose = onClose;
  }

  close(): void {
    this.socket?.close();
    this.socket = null;
  }
}
