import { RunRecordDoc, RunRequest, SystemDoc } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function check<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = await res.json();
      if (body.detail) detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(res.status, detail);
  }
  return res.json() as Promise<T>;
}

export async function getSystem(): Promise<SystemDoc> {
  return check(await fetch("/system"));
}

export async function getRuns(): Promise<RunRecordDoc[]> {
  return check(await fetch("/runs"));
}

export async function getRun(id: number): Promise<RunRecordDoc> {
  return check(await fetch(`/runs/${id}`));
}

export async function postRun(req: RunRequest): Promise<RunRecordDoc> {
  return check(
    await fetch("/runs", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    }),
  );
}

export async function deleteRun(id: number): Promise<void> {
  const res = await fetch(`/runs/${id}`, { method: "DELETE" });
  if (!res.ok) throw new ApiError(res.status, res.statusText);
}
