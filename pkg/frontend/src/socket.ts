import { parseStatus, StatusFrame } from './protocol'
import { Connection } from './state'

export interface EngineSocketHandlers {
  onConnection: (connection: Connection) => void
  onStatus: (frame: StatusFrame) => void
}

/**
 * One WebSocket session to the live engine.
 *
 * Reconnects automatically after a dropped connection (the retry
 * affordance) until close() is called; messages sent while disconnected
 * are dropped and reported by the boolean return of send().
 */
export class EngineSocket {
  private ws: WebSocket | null = null
  private closed = false
  private retryTimer: ReturnType<typeof setTimeout> | null = null

  constructor(
    private url: string,
    private handlers: EngineSocketHandlers,
    private retryMs = 1500,
  ) {}

  connect(): void {
    this.closed = false
    this.open()
  }

  private open(): void {
    this.handlers.onConnection('connecting')
    let ws: WebSocket
    try {
      ws = new WebSocket(this.url)
    } catch {
      this.dropped()
      return
    }
    this.ws = ws
    ws.onopen = () => this.handlers.onConnection('connected')
    ws.onmessage = (event: MessageEvent) => {
      const frame = parseStatus(String(event.data))
      if (frame) this.handlers.onStatus(frame)
    }
    ws.onclose = () => this.dropped()
    ws.onerror = () => {
      /* the close event follows and drives the retry */
    }
  }

  private dropped(): void {
    this.ws = null
    this.handlers.onConnection('disconnected')
    if (!this.closed && this.retryTimer === null) {
      this.retryTimer = setTimeout(() => {
        this.retryTimer = null
        if (!this.closed) this.open()
      }, this.retryMs)
    }
  }

  send(message: object): boolean {
    if (this.ws === null || this.ws.readyState !== WebSocket.OPEN) return false
    this.ws.send(JSON.stringify(message))
    return true
  }

  close(): void {
    this.closed = true
    if (this.retryTimer !== null) {
      clearTimeout(this.retryTimer)
      this.retryTimer = null
    }
    this.ws?.close()
    this.ws = null
  }
}
