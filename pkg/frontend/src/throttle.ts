/**
 * Rate-limit a stream of values to at most one emit per interval.
 *
 * The leading value goes out immediately when the window is free; while
 * the window is busy the latest value is parked and flushed when the
 * window reopens, so the final position of a drag is always delivered.
 */
export function createThrottle<T>(
  intervalMs: number,
  emit: (value: T) => void,
): (value: T) => void {
  let lastSent = -Infinity
  let pending: { value: T } | null = null
  let timer: ReturnType<typeof setTimeout> | null = null

  const flush = () => {
    timer = null
    if (pending !== null) {
      const { value } = pending
      pending = null
      lastSent = Date.now()
      emit(value)
    }
  }

  return (value: T) => {
    const now = Date.now()
    if (timer === null && now - lastSent >= intervalMs) {
      lastSent = now
      emit(value)
      return
    }
    pending = { value }
    if (timer === null) {
      // ceil: timers truncate to whole ms, which would shave the window
      // and let the rate creep past the budget
      timer = setTimeout(flush, Math.max(Math.ceil(intervalMs - (now - lastSent)), 1))
    }
  }
}
