// Control messages exchanged with the live engine over one WebSocket.
// The wire format is pinned by ../schema/control.json, shared with the
// engine's own tests; keep the two in sync.

export type Slot = 'A' | 'B'

export interface StatusFrame {
  kind: 'status'
  k: number
  rms: number
  hop: number
}

export function clampK(k: number): number {
  if (Number.isNaN(k)) return 0
  return Math.min(1, Math.max(0, k))
}

export function setK(k: number) {
  return { kind: 'set_k' as const, k: clampK(k) }
}

export function load(slot: Slot, path: string) {
  return { kind: 'load' as const, slot, path }
}

export function start() {
  return { kind: 'start' as const }
}

export function stop() {
  return { kind: 'stop' as const }
}

export function statusRequest() {
  return { kind: 'status' as const }
}

/** Parse an incoming frame; returns null for anything but a well-formed status. */
export function parseStatus(raw: string): StatusFrame | null {
  let message: unknown
  try {
    message = JSON.parse(raw)
  } catch {
    return null
  }
  if (typeof message !== 'object' || message === null) return null
  const frame = message as Record<string, unknown>
  if (
    frame.kind === 'status' &&
    typeof frame.k === 'number' &&
    typeof frame.rms === 'number' &&
    typeof frame.hop === 'number'
  ) {
    return { kind: 'status', k: frame.k, rms: frame.rms, hop: frame.hop }
  }
  return null
}
