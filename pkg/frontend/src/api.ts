import type { ApiError, VideoCard } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the curation JSON API. */
export class ApiClient {
    constructor(private readonly fetchImpl: FetchLike = fetch.bind(globalThis)) {}

    async listVideos(): Promise<VideoCard[]> {
        const res = await this.fetchImpl("/api/videos");
        if (!res.ok) throw await toError(res);
        return (await res.json()) as VideoCard[];
    }

    /** Exactly one POST per selection commit; resolves only on server ack. */
    async commitSelection(videoId: string, frame: number, note = ""): Promise<number> {
        const res = await this.fetchImpl(
            `/api/videos/${encodeURIComponent(videoId)}/selection`,
            {
                method: "POST",
                headers: { "content-type": "application/json" },
                body: JSON.stringify({ frame, note }),
            },
        );
        if (!res.ok) throw await toError(res);
        const body = (await res.json()) as { ok: boolean; manifest_revision: number };
        return body.manifest_revision;
    }

    async rejectVideo(videoId: string, note = ""): Promise<number> {
        const res = await this.fetchImpl(
            `/api/videos/${encodeURIComponent(videoId)}/rejection`,
            {
                method: "POST",
                headers: { "content-type": "application/json" },
                body: JSON.stringify({ note }),
            },
        );
        if (!res.ok) throw await toError(res);
        const body = (await res.json()) as { ok: boolean; manifest_revision: number };
        return body.manifest_revision;
    }

    async exportPairs(): Promise<{ pairs: number; report_path: string }> {
        const res = await this.fetchImpl("/api/export", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: "{}",
        });
        if (!res.ok) throw await toError(res);
        return (await res.json()) as { pairs: number; report_path: string };
    }
}

async function toError(res: Response): Promise<Error> {
    let detail = `${res.status}`;
    try {
        const body = (await res.json()) as ApiError;
        if (body.error) detail = `${body.error} [${body.code}]`;
    } catch {
        // non-JSON body: keep the status code
    }
    return new Error(detail);
}

/** Frame image URL; the server renders candidates per parameter tag. */
export function frameUrl(
    videoId: string,
    frame: number,
    kind: "snowy" | "candidate",
    paramTag: string | null = null,
): string {
    const base = `/api/videos/${encodeURIComponent(videoId)}/frames/${frame}?kind=${kind}`;
    if (kind === "candidate" && paramTag) {
        return `${base}&params=${encodeURIComponent(paramTag)}`;
    }
    return base;
}

/** Residual overlay URL; tau is threaded through as a query parameter. */
export function residualUrl(
    videoId: string,
    frame: number,
    tau: number,
    paramTag: string | null = null,
): string {
    const base = `/api/videos/${encodeURIComponent(videoId)}/residual/${frame}?tau=${tau}`;
    return paramTag ? `${base}&params=${encodeURIComponent(paramTag)}` : base;
}
