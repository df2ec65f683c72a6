import { ApiClient } from "./api.js";
import { renderCompare, renderGallery, renderRetryBanner, renderToast } from "./render.js";
import {
    FLICKER_PERIOD_MS,
    flickerTick,
    keyToAction,
    openCompare,
    setMode,
    setParamTag,
    setTau,
    stepFrame,
    toggleFlicker,
} from "./state.js";
import type { CompareState, VideoCard, ViewMode } from "./types.js";

const api = new ApiClient();
const root = document.getElementById("app") as HTMLElement;

// All render state derives from the last server listing plus the ephemeral
// compare cursor; a hard refresh reconstructs everything from GET /api/videos.
let cards: VideoCard[] = [];
let compare: CompareState | null = null;
let flickerTimer: number | null = null;

async function refresh(): Promise<void> {
    try {
        cards = await api.listVideos();
    } catch (err) {
        stopFlicker();
        root.innerHTML = renderRetryBanner(String(err));
        document.getElementById("retry")?.addEventListener("click", () => void refresh());
        return;
    }
    if (compare) {
        const card = cards.find((c) => c.id === compare!.videoId);
        if (!card) {
            compare = null;
        } else {
            compare = { ...compare, frameCount: card.frames };
        }
    }
    draw();
}

function draw(): void {
    if (compare) {
        const card = cards.find((c) => c.id === compare!.videoId);
        if (!card) {
            compare = null;
            draw();
            return;
        }
        root.innerHTML = renderCompare(compare, card);
        wireCompare(card);
        syncFlickerTimer();
    } else {
        stopFlicker();
        root.innerHTML = renderGallery(cards);
        for (const el of root.querySelectorAll<HTMLElement>(".card")) {
            el.addEventListener("click", () => {
                const card = cards.find((c) => c.id === el.dataset.video);
                if (card) {
                    compare = openCompare(card);
                    draw();
                }
            });
        }
    }
}

function wireCompare(card: VideoCard): void {
    document.getElementById("back")?.addEventListener("click", () => {
        compare = null;
        void refresh();
    });
    for (const el of root.querySelectorAll<HTMLElement>("[data-mode]")) {
        el.addEventListener("click", () => {
            if (compare) {
                compare = setMode(compare, el.dataset.mode as ViewMode);
                draw();
            }
        });
    }
    document.getElementById("tau")?.addEventListener("change", (ev) => {
        if (compare) {
            compare = setTau(compare, Number((ev.target as HTMLInputElement).value));
            draw();
        }
    });
    document.getElementById("param-tag")?.addEventListener("change", (ev) => {
        if (compare) {
            compare = setParamTag(compare, (ev.target as HTMLSelectElement).value);
            draw();
        }
    });
    document.getElementById("commit")?.addEventListener("click", () => void commit());
    document.getElementById("reject")?.addEventListener("click", () => void reject());
}

async function commit(): Promise<void> {
    if (!compare) return;
    const { videoId, frame } = compare;
    try {
        await api.commitSelection(videoId, frame);
    } catch (err) {
        toast(`selection failed: ${String(err)}`);
        return; // no optimistic update: state stays as the server last told us
    }
    await refresh(); // badge changes only after the server acknowledged
}

async function reject(): Promise<void> {
    if (!compare) return;
    try {
        await api.rejectVideo(compare.videoId);
    } catch (err) {
        toast(`rejection failed: ${String(err)}`);
        return;
    }
    await refresh();
}

function toast(message: string): void {
    const holder = document.createElement("div");
    holder.innerHTML = renderToast(message);
    document.body.appendChild(holder);
    setTimeout(() => holder.remove(), 4000);
}

function syncFlickerTimer(): void {
    const shouldRun = compare?.mode === "flicker";
    if (shouldRun && flickerTimer === null) {
        flickerTimer = window.setInterval(() => {
            if (compare?.mode === "flicker") {
                compare = flickerTick(compare);
                draw();
            }
        }, FLICKER_PERIOD_MS);
    } else if (!shouldRun) {
        stopFlicker();
    }
}

function stopFlicker(): void {
    if (flickerTimer !== null) {
        window.clearInterval(flickerTimer);
        flickerTimer = null;
    }
}

document.addEventListener("keydown", (ev) => {
    if (!compare) return;
    const action = keyToAction(ev.key);
    if (action.kind === "none") return;
    ev.preventDefault();
    if (action.kind === "step") {
        compare = stepFrame(compare, action.delta ?? 0);
        draw();
    } else if (action.kind === "toggle-flicker") {
        compare = toggleFlicker(compare);
        draw();
    } else if (action.kind === "commit") {
        void commit();
    }
});

// tolerate concurrent server-side changes: re-fetch whenever focus returns
window.addEventListener("focus", () => void refresh());

void refresh();
