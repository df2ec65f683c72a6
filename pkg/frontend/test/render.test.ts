import { describe, expect, it } from "vitest";

import { renderCompare, renderGallery, renderRetryBanner } from "../src/render.js";
import { openCompare, setMode, setTau } from "../src/state.js";
import type { VideoCard } from "../src/types.js";

function card(id: string, status: VideoCard["status"], extra: Partial<VideoCard> = {}): VideoCard {
    return {
        id,
        frames: 8,
        resolution: "16x16",
        status,
        selection: null,
        candidate_tags: ["t0"],
        ...extra,
    };
}

describe("renderGallery", () => {
    it("shows the empty state with no videos", () => {
        expect(renderGallery([])).toContain("no videos");
    });

    it("renders status badges and pending-first order", () => {
        const html = renderGallery([
            card("zzz_pending", "pending"),
            card("aaa_selected", "selected"),
        ]);
        expect(html.indexOf("zzz_pending")).toBeLessThan(html.indexOf("aaa_selected"));
        expect(html).toContain('badge pending');
        expect(html).toContain('badge selected');
    });

    it("is a pure function of the server listing", () => {
        const listing = [card("a", "pending"), card("b", "rejected")];
        expect(renderGallery(listing)).toBe(renderGallery(listing));
    });

    it("escapes markup in ids", () => {
        const html = renderGallery([card("<script>", "pending")]);
        expect(html).not.toContain("<script>");
        expect(html).toContain("&lt;script&gt;");
    });
});

describe("renderCompare", () => {
    const c = card("clip_a", "pending");

    it("side-by-side shows both panes", () => {
        const html = renderCompare(openCompare(c), c);
        expect(html).toContain("kind=snowy");
        expect(html).toContain("kind=candidate");
    });

    it("residual mode fetches the overlay at the current tau", () => {
        const state = setTau(setMode(openCompare(c), "residual-overlay"), 0.12);
        const html = renderCompare(state, c);
        expect(html).toContain("/residual/0?tau=0.12");
    });

    it("missing candidates produce the inline notice", () => {
        const bare = card("clip_b", "pending", { candidate_tags: [] });
        const html = renderCompare(openCompare(bare), bare);
        expect(html).toContain("no candidate for these parameters");
    });

    it("marks the server-selected frame", () => {
        const chosen = card("clip_c", "selected", {
            selection: { frame: 2, note: "", timestamp: "t" },
        });
        const html = renderCompare(openCompare(chosen), chosen);
        expect(html).toContain("frame 3 / 8");
        expect(html).toContain("(selected)");
    });

    it("flicker alternates between the two images", () => {
        const on = setMode(openCompare(c), "flicker");
        const snowyHtml = renderCompare(on, c);
        const candidateHtml = renderCompare(
            { ...on, flickerShowsCandidate: true }, c,
        );
        expect(snowyHtml).toContain("flicker: snowy");
        expect(candidateHtml).toContain("flicker: candidate");
    });

    it("reject is disabled for non-pending videos", () => {
        const selected = card("clip_d", "selected", {
            selection: { frame: 0, note: "", timestamp: "t" },
        });
        const html = renderCompare(openCompare(selected), selected);
        expect(html).toMatch(/id="reject"\s+disabled/);
    });
});

describe("renderRetryBanner", () => {
    it("offers a retry and never fakes data", () => {
        const html = renderRetryBanner("connect ECONNREFUSED");
        expect(html).toContain("retry");
        expect(html).toContain("ECONNREFUSED");
    });
});
