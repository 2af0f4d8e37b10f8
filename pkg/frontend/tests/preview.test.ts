import { describe, expect, it } from "vitest";

import { JOINTS_PER_BODY, overlayPoints, totalJointCount } from "../src/preview.js";
import type { PreviewMessage, PreviewSkeleton } from "../src/types.js";

function skeleton(bodyIndex: number, jointCount = JOINTS_PER_BODY): PreviewSkeleton {
  return {
    body_index: bodyIndex,
    joints: Array.from({ length: jointCount }, (_, i) => ({
      name: `joint${i}`,
      x: i * 2,
      y: i * 3,
      tracking_state: "Tracked",
    })),
  };
}

function message(skeletons: PreviewSkeleton[]): PreviewMessage {
  return {
    frame_index: 0,
    timestamp_ms: 0,
    color_png_b64: "",
    depth_png_b64: "",
    skeletons,
  };
}

describe("preview skeleton invariants", () => {
  it("joint count is 25 per body", () => {
    expect(totalJointCount(message([skeleton(0)]))).toBe(25);
    expect(totalJointCount(message([skeleton(0), skeleton(1)]))).toBe(50);
    expect(totalJointCount(message([]))).toBe(0);
  });

  it("rejects messages whose joint count is not a multiple of 25", () => {
    expect(() => totalJointCount(message([skeleton(0, 24)]))).toThrow(/multiple of 25/);
  });

  it("renders 25 overlay points per body", () => {
    const points = overlayPoints(message([skeleton(0), skeleton(3)]));
    expect(points).toHaveLength(50);
    expect(points.filter((p) => p.bodyIndex === 3)).toHaveLength(25);
  });

  it("scales depth-image coordinates onto the thumbnail", () => {
    // depth image is 512x424, default target 256x212: exactly half scale
    const points = overlayPoints(message([skeleton(0)]));
    expect(points[1].x).toBeCloseTo(1, 9);
    expect(points[1].y).toBeCloseTo(1.5, 9);
    const native = overlayPoints(message([skeleton(0)]), 512, 424);
    expect(native[1].x).toBeCloseTo(2, 9);
    expect(native[1].y).toBeCloseTo(3, 9);
  });
});
