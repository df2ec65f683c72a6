import { frameUrl, residualUrl } from "./api.js";
import { orderCards } from "./state.js";
import type { CompareState, VideoCard } from "./types.js";

function esc(text: string): string {
    return text
        .replaceAll("&", "&amp;")
        .replaceAll("<", "&lt;")
        .replaceAll(">", "&gt;")
        .replaceAll('"', "&quot;");
}

export function renderGallery(cards: VideoCard[]): string {
    if (cards.length === 0) {
        return `<p class="empty">no videos - ingest a workspace first</p>`;
    }
    const items = orderCards(cards)
        .map((card) => {
            const chosen = card.selection
                ? `<span class="chosen">frame ${card.selection.frame}</span>`
                : "";
            return `
<article class="card" data-video="${esc(card.id)}">
  <img src="${frameUrl(card.id, 0, "snowy")}" alt="${esc(card.id)}" loading="lazy">
  <div class="meta">
    <h3>${esc(card.id)}</h3>
    <span class="dims">${esc(card.resolution)} x ${card.frames}f</span>
    <span class="badge ${card.status}">${card.status}</span>
    ${chosen}
  </div>
</article>`;
        })
        .join("\n");
    return `<section class="gallery">${items}</section>`;
}

export function renderRetryBanner(message: string): string {
    return `
<div class="banner error">
  <p>cannot reach the curation service: ${esc(message)}</p>
  <button id="retry">retry</button>
</div>`;
}

export function renderCompare(state: CompareState, card: VideoCard): string {
    const snowy = frameUrl(state.videoId, state.frame, "snowy");
    const candidate = frameUrl(state.videoId, state.frame, "candidate", state.paramTag);
    const overlay = residualUrl(state.videoId, state.frame, state.tau, state.paramTag);
    const noCandidate = card.candidate_tags.length === 0;

    let panel: string;
    if (noCandidate) {
        panel = `<p class="notice">no candidate for these parameters - run the candidates step</p>`;
    } else if (state.mode === "side-by-side") {
        panel = `
<div class="panes">
  <figure><img src="${snowy}" alt="snowy"><figcaption>snowy</figcaption></figure>
  <figure><img src="${candidate}" alt="candidate"><figcaption>candidate</figcaption></figure>
</div>`;
    } else if (state.mode === "flicker") {
        const src = state.flickerShowsCandidate ? candidate : snowy;
        const label = state.flickerShowsCandidate ? "candidate" : "snowy";
        panel = `
<div class="panes single">
  <figure><img src="${src}" alt="${label}"><figcaption>flicker: ${label}</figcaption></figure>
</div>`;
    } else {
        panel = `
<div class="panes single">
  <figure><img src="${overlay}" alt="residual overlay">
  <figcaption>residual mask (red) at tau ${state.tau.toFixed(2)}</figcaption></figure>
</div>`;
    }

    const tagOptions = card.candidate_tags
        .map((tag) => {
            const selected = tag === state.paramTag ? " selected" : "";
            return `<option value="${esc(tag)}"${selected}>${esc(tag)}</option>`;
        })
        .join("");
    const isChosen = card.selection?.frame === state.frame;

    return `
<section class="compare" data-video="${esc(state.videoId)}">
  <header>
    <button id="back">&larr; gallery</button>
    <h2>${esc(state.videoId)}</h2>
    <span class="badge ${card.status}">${card.status}</span>
  </header>
  ${panel}
  <footer class="controls">
    <span class="frame-indicator${isChosen ? " chosen" : ""}">
      frame ${state.frame + 1} / ${state.frameCount}${isChosen ? " (selected)" : ""}
    </span>
    <nav class="modes">
      <button data-mode="side-by-side"${state.mode === "side-by-side" ? " class='active'" : ""}>side-by-side</button>
      <button data-mode="flicker"${state.mode === "flicker" ? " class='active'" : ""}>flicker</button>
      <button data-mode="residual-overlay"${state.mode === "residual-overlay" ? " class='active'" : ""}>residual</button>
    </nav>
    <label>tau <input id="tau" type="range" min="0.01" max="0.5" step="0.01" value="${state.tau}"></label>
    <label>params <select id="param-tag">${tagOptions}</select></label>
    <button id="commit" ${noCandidate ? "disabled" : ""}>select this frame</button>
    <button id="reject" ${card.status !== "pending" ? "disabled" : ""}>reject video</button>
  </footer>
  <p class="hint">arrows: step frames &middot; space: flicker &middot; enter: select</p>
</section>`;
}

export function renderToast(message: string): string {
    return `<div class="toast">${esc(message)}</div>`;
}
