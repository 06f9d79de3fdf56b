import { bindFader, setFaderDisplay } from './fader'
import { load, setK, start, statusRequest, stop } from './protocol'
import { EngineSocket } from './socket'
import {
  applyConnection,
  applyStatus,
  initialState,
  moveFader,
  UiState,
} from './state'
import { createThrottle } from './throttle'

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id)
  if (!el) throw new Error(`missing element #${id}`)
  return el as T
}

const urlInput = $<HTMLInputElement>('engine-url')
const connectButton = $<HTMLButtonElement>('connect')
const connectionLabel = $('connection')
const track = $('fader-track')
const handle = $('fader-handle')
const engineMark = $('engine-mark')
const kLocalLabel = $('k-local')
const kEngineLabel = $('k-engine')
const rmsBar = $('rms-bar')
const hopLabel = $('hop')
const slotAInput = $<HTMLInputElement>('slot-a')
const slotBInput = $<HTMLInputElement>('slot-b')

let state: UiState = initialState
let socket: EngineSocket | null = null

// The engine samples k at 40 hops/s; 60 messages/s comfortably outruns it
// while keeping rapid pointer jitter off the wire.
const sendK = createThrottle<number>(1000 / 60, (k) => socket?.send(setK(k)))

function renderState(): void {
  connectionLabel.textContent = state.connection
  connectionLabel.dataset.state = state.connection
  connectButton.textContent =
    state.connection === 'disconnected' ? 'connect' : 'disconnect'
  document.body.classList.toggle('connected', state.connection === 'connected')
  setFaderDisplay(track, handle, state.kLocal)
  engineMark.style.bottom = `${state.kEngine * 100}%`
  kLocalLabel.textContent = state.kLocal.toFixed(2)
  kEngineLabel.textContent = state.kEngine.toFixed(2)
  rmsBar.style.width = `${Math.min(state.rms * 300, 100)}%`
  hopLabel.textContent = String(state.hop)
}

function update(next: UiState): void {
  state = next
  renderState()
}

bindFader(track, {
  isEnabled: () => state.connection === 'connected',
  onMove: (position) => {
    update(moveFader(state, position))
    sendK(state.kLocal)
  },
})

connectButton.addEventListener('click', () => {
  if (socket) {
    socket.close()
    socket = null
    update(applyConnection(state, 'disconnected'))
    return
  }
  socket = new EngineSocket(urlInput.value, {
    onConnection: (connection) => {
      update(applyConnection(state, connection))
      if (connection === 'connected') socket?.send(statusRequest())
    },
    onStatus: (frame) => update(applyStatus(state, frame)),
  })
  socket.connect()
})

$('load-a').addEventListener('click', () => socket?.send(load('A', slotAInput.value)))
$('load-b').addEventListener('click', () => socket?.send(load('B', slotBInput.value)))
$('start').addEventListener('click', () => socket?.send(start()))
$('stop').addEventListener('click', () => socket?.send(stop()))

renderState()
