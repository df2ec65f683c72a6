export type VideoStatus = "pending" | "selected" | "rejected";

export interface Selection {
    frame: number;
    note: string;
    timestamp: string;
}

/** One row of GET /api/videos; rendered from server state only. */
export interface VideoCard {
    id: string;
    frames: number;
    resolution: string;
    status: VideoStatus;
    selection: Selection | null;
    candidate_tags: string[];
}

export type ViewMode = "side-by-side" | "flicker" | "residual-overlay";

export interface CompareState {
    videoId: string;
    frame: number;
    frameCount: number;
    mode: ViewMode;
    paramTag: string | null;
    tau: number;
    /** which image the flicker currently shows */
    flickerShowsCandidate: boolean;
}

export interface ApiError {
    error: string;
    code: string;
}
