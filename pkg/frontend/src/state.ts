import { clampK, StatusFrame } from './protocol'

export type Connection = 'disconnected' | 'connecting' | 'connected'

export interface UiState {
  connection: Connection
  kLocal: number // fader position, updates immediately for responsive visuals
  kEngine: number // last k confirmed by a status frame
  rms: number
  hop: number
}

export const initialState: UiState = {
  connection: 'disconnected',
  kLocal: 0,
  kEngine: 0,
  rms: 0,
  hop: 0,
}

export function applyConnection(state: UiState, connection: Connection): UiState {
  return { ...state, connection }
}

/** kEngine/rms/hop only ever change through a status frame. */
export function applyStatus(state: UiState, frame: StatusFrame): UiState {
  return { ...state, kEngine: frame.k, rms: frame.rms, hop: frame.hop }
}

export function moveFader(state: UiState, position: number): UiState {
  return { ...state, kLocal: clampK(position) }
}

export function stepFader(state: UiState, steps: number): UiState {
  // keyboard accessibility: one step is 0.01
  return moveFader(state, state.kLocal + steps * 0.01)
}
