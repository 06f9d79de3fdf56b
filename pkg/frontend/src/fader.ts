import { clampK } from './protocol'

/** Map a pointer's clientY onto a vertical track: bottom = 0, top = 1. */
export function positionFromPointer(rect: { top: number; height: number }, clientY: number): number {
  if (rect.height <= 0) return 0
  return clampK((rect.top + rect.height - clientY) / rect.height)
}

export interface FaderOptions {
  onMove: (position: number) => void
  isEnabled: () => boolean
}

/**
 * Bind pointer and keyboard control to the fader track element.
 *
 * Dragging maps the pointer straight onto the track; arrow keys move one
 * 0.01 step (Home/End jump to the endpoints). The handle itself is
 * rendered by the caller via setFaderDisplay.
 */
export function bindFader(track: HTMLElement, options: FaderOptions): void {
  let dragging = false

  const moveTo = (clientY: number) => {
    options.onMove(positionFromPointer(track.getBoundingClientRect(), clientY))
  }

  track.addEventListener('pointerdown', (event) => {
    if (!options.isEnabled()) return
    dragging = true
    track.setPointerCapture(event.pointerId)
    moveTo(event.clientY)
  })
  track.addEventListener('pointermove', (event) => {
    if (dragging && options.isEnabled()) moveTo(event.clientY)
  })
  const release = (event: PointerEvent) => {
    if (dragging && track.hasPointerCapture(event.pointerId)) {
      track.releasePointerCapture(event.pointerId)
    }
    dragging = false
  }
  track.addEventListener('pointerup', release)
  track.addEventListener('pointercancel', release)

  track.addEventListener('keydown', (event) => {
    if (!options.isEnabled()) return
    const current = Number(track.getAttribute('aria-valuenow') ?? '0')
    let next: number | null = null
    switch (event.key) {
      case 'ArrowUp':
      case 'ArrowRight':
        next = current + 0.01
        break
      case 'ArrowDown':
      case 'ArrowLeft':
        next = current - 0.01
        break
      case 'Home':
        next = 0
        break
      case 'End':
        next = 1
        break
    }
    if (next !== null) {
      event.preventDefault()
      options.onMove(clampK(next))
    }
  })
}

/** Reflect a fader position on the track's handle and ARIA attributes. */
export function setFaderDisplay(track: HTMLElement, handle: HTMLElement, position: number): void {
  handle.style.bottom = `${position * 100}%`
  track.setAttribute('aria-valuenow', position.toFixed(3))
}
