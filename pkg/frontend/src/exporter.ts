// Export: download the server's bundle (model + ops + configs + documents)
// exactly as served.

import type { ApiClient } from "./api.js";

export async function fetchBundleBlob(
  api: ApiClient,
  sessionId: string,
): Promise<{ blob: Blob; payload: unknown }> {
  const payload = await api.exportBundle(sessionId);
  const blob = new Blob([JSON.stringify(payload)], { type: "application/json" });
  return { blob, payload };
}

export function attachExportButton(
  doc: Document,
  button: HTMLButtonElement,
  api: ApiClient,
  sessionId: () => string,
  download: (blob: Blob, filename: string) => void = (blob, filename) => {
    const url = URL.createObjectURL(blob);
    const anchor = doc.createElement("a");
    anchor.href = url;
    anchor.download = filename;
    anchor.click();
    URL.revokeObjectURL(url);
  },
): void {
  button.addEventListener("click", () => {
    void fetchBundleBlob(api, sessionId()).then(({ blob }) =>
      download(blob, `table-${sessionId()}.bundle.json`),
    );
  });
}
