import type { CompareState, VideoCard, ViewMode } from "./types.js";

export const FLICKER_PERIOD_MS = 500;

/** Gallery ordering: pending videos first, then alphabetical within status. */
export function orderCards(cards: VideoCard[]): VideoCard[] {
    const rank = { pending: 0, selected: 1, rejected: 2 } as const;
    return [...cards].sort((a, b) => {
        const byStatus = rank[a.status] - rank[b.status];
        return byStatus !== 0 ? byStatus : a.id.localeCompare(b.id);
    });
}

/** Initial compare state for a card; the server's selection pre-highlights. */
export function openCompare(card: VideoCard): CompareState {
    return {
        videoId: card.id,
        frame: card.selection ? card.selection.frame : 0,
        frameCount: card.frames,
        mode: "side-by-side",
        paramTag: card.candidate_tags[0] ?? null,
        tau: 0.05,
        flickerShowsCandidate: false,
    };
}

/** Frame stepping clamps at [0, frameCount - 1]. */
export function stepFrame(state: CompareState, delta: number): CompareState {
    const frame = Math.min(Math.max(state.frame + delta, 0), state.frameCount - 1);
    return { ...state, frame };
}

/** Mode switches preserve the frame index. */
export function setMode(state: CompareState, mode: ViewMode): CompareState {
    return { ...state, mode };
}

export function toggleFlicker(state: CompareState): CompareState {
    if (state.mode !== "flicker") {
        return { ...state, mode: "flicker", flickerShowsCandidate: false };
    }
    return { ...state, mode: "side-by-side" };
}

export function flickerTick(state: CompareState): CompareState {
    return { ...state, flickerShowsCandidate: !state.flickerShowsCandidate };
}

export function setTau(state: CompareState, tau: number): CompareState {
    const clamped = Math.min(Math.max(tau, 0.01), 0.99);
    return { ...state, tau: clamped };
}

export function setParamTag(state: CompareState, paramTag: string): CompareState {
    return { ...state, paramTag };
}

export interface KeyAction {
    kind: "step" | "toggle-flicker" | "commit" | "none";
    delta?: number;
}

/** Keyboard contract: arrows step frames, space toggles flicker, enter commits. */
export function keyToAction(key: string): KeyAction {
    switch (key) {
        case "ArrowRight":
            return { kind: "step", delta: 1 };
        case "ArrowLeft":
            return { kind: "step", delta: -1 };
        case " ":
            return { kind: "toggle-flicker" };
        case "Enter":
            return { kind: "commit" };
        default:
            return { kind: "none" };
    }
}
