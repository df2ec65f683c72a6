import { describe, expect, it } from "vitest";

import {
    FLICKER_PERIOD_MS,
    flickerTick,
    keyToAction,
    openCompare,
    orderCards,
    setMode,
    setParamTag,
    setTau,
    stepFrame,
    toggleFlicker,
} from "../src/state.js";
import type { VideoCard } from "../src/types.js";

function card(id: string, status: VideoCard["status"], extra: Partial<VideoCard> = {}): VideoCard {
    return {
        id,
        frames: 8,
        resolution: "16x16",
        status,
        selection: null,
        candidate_tags: ["tag0"],
        ...extra,
    };
}

describe("orderCards", () => {
    it("puts pending first, then selected, then rejected", () => {
        const cards = [
            card("b", "selected"),
            card("a", "rejected"),
            card("d", "pending"),
            card("c", "pending"),
        ];
        expect(orderCards(cards).map((c) => c.id)).toEqual(["c", "d", "b", "a"]);
    });

    it("does not mutate the input", () => {
        const cards = [card("b", "selected"), card("a", "pending")];
        orderCards(cards);
        expect(cards.map((c) => c.id)).toEqual(["b", "a"]);
    });
});

describe("openCompare", () => {
    it("starts at frame 0 for unselected videos", () => {
        const state = openCompare(card("v", "pending"));
        expect(state.frame).toBe(0);
        expect(state.mode).toBe("side-by-side");
        expect(state.paramTag).toBe("tag0");
    });

    it("pre-highlights the server-side selection", () => {
        const state = openCompare(
            card("v", "selected", {
                selection: { frame: 5, note: "", timestamp: "t" },
            }),
        );
        expect(state.frame).toBe(5);
    });

    it("handles videos with no candidates", () => {
        const state = openCompare(card("v", "pending", { candidate_tags: [] }));
        expect(state.paramTag).toBeNull();
    });
});

describe("stepFrame", () => {
    const base = openCompare(card("v", "pending"));

    it("steps forward and backward", () => {
        expect(stepFrame(base, 1).frame).toBe(1);
        expect(stepFrame({ ...base, frame: 3 }, -1).frame).toBe(2);
    });

    it("clamps at the last frame", () => {
        expect(stepFrame({ ...base, frame: 7 }, 1).frame).toBe(7);
        expect(stepFrame({ ...base, frame: 7 }, 100).frame).toBe(7);
    });

    it("clamps at zero", () => {
        expect(stepFrame(base, -1).frame).toBe(0);
    });
});

describe("view modes", () => {
    const base = openCompare(card("v", "pending"));

    it("mode switch preserves the frame index", () => {
        const at3 = { ...base, frame: 3 };
        expect(setMode(at3, "residual-overlay").frame).toBe(3);
        expect(setMode(at3, "flicker").frame).toBe(3);
    });

    it("space toggles flicker on and off", () => {
        const on = toggleFlicker(base);
        expect(on.mode).toBe("flicker");
        const off = toggleFlicker(on);
        expect(off.mode).toBe("side-by-side");
    });

    it("flicker alternates the displayed image", () => {
        const on = toggleFlicker(base);
        expect(on.flickerShowsCandidate).toBe(false);
        expect(flickerTick(on).flickerShowsCandidate).toBe(true);
        expect(flickerTick(flickerTick(on)).flickerShowsCandidate).toBe(false);
    });

    it("flicker period is fixed at 500 ms", () => {
        expect(FLICKER_PERIOD_MS).toBe(500);
    });
});

describe("tau and params", () => {
    const base = openCompare(card("v", "pending"));

    it("tau is clamped to a sane range", () => {
        expect(setTau(base, -1).tau).toBe(0.01);
        expect(setTau(base, 2).tau).toBe(0.99);
        expect(setTau(base, 0.12).tau).toBe(0.12);
    });

    it("param tag switch keeps everything else", () => {
        const next = setParamTag({ ...base, frame: 2 }, "other");
        expect(next.paramTag).toBe("other");
        expect(next.frame).toBe(2);
    });
});

describe("keyToAction", () => {
    it("maps the documented keys", () => {
        expect(keyToAction("ArrowRight")).toEqual({ kind: "step", delta: 1 });
        expect(keyToAction("ArrowLeft")).toEqual({ kind: "step", delta: -1 });
        expect(keyToAction(" ")).toEqual({ kind: "toggle-flicker" });
        expect(keyToAction("Enter")).toEqual({ kind: "commit" });
        expect(keyToAction("x")).toEqual({ kind: "none" });
    });
});
