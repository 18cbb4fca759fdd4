import { ComputeParams, CsaReport, MeshPayload, SessionInfo } from "./types";

export class ServiceError extends Error {
  constructor(public readonly status: number, detail: string) {
    super(detail);
  }
}

async function raiseForStatus(resp: Response): Promise<void> {
  if (resp.ok) return;
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body, keep the status text
  }
  throw new ServiceError(resp.status, detail);
}

export class CsaClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async createSession(organ: Blob, tumor: Blob): Promise<SessionInfo> {
    const form = new FormData();
    form.append("organ", organ, "organ.stl");
    form.append("tumor", tumor, "tumor.stl");
    const resp = await this.fetchFn(`${this.baseUrl}/sessions`, {
      method: "POST",
      body: form,
    });
    await raiseForStatus(resp);
    return resp.json();
  }

  async compute(
    sessionId: string,
    params: ComputeParams,
    includeDistribution = true,
  ): Promise<CsaReport> {
    const query = includeDistribution ? "?include_distribution=1" : "";
    const resp = await this.fetchFn(
      `${this.baseUrl}/sessions/${sessionId}/compute${query}`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(params),
      },
    );
    await raiseForStatus(resp);
    return resp.json();
  }

  async fetchMesh(sessionId: string, which: "organ" | "tumor"): Promise<MeshPayload> {
    const resp = await this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/mesh/${which}`);
    await raiseForStatus(resp);
    return resp.json();
  }
}
