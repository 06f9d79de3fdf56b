import { readFileSync } from 'node:fs'
import { dirname, join } from 'node:path'
import { fileURLToPath } from 'node:url'

import Ajv from 'ajv'
import { describe, expect, it } from 'vitest'

import { clampK, load, parseStatus, setK, start, statusRequest, stop } from '../src/protocol'

const here = dirname(fileURLToPath(import.meta.url))
const schema = JSON.parse(
  readFileSync(join(here, '..', '..', 'schema', 'control.json'), 'utf-8'),
)
const validate = new Ajv().compile(schema)

describe('clampK', () => {
  it('clamps to the unit interval', () => {
    expect(clampK(-0.2)).toBe(0)
    expect(clampK(0.42)).toBe(0.42)
    expect(clampK(1.5)).toBe(1)
    expect(clampK(Number.NaN)).toBe(0)
  })
})

describe('outgoing messages', () => {
  it('match the shared control schema', () => {
    for (const message of [
      setK(0.5),
      setK(2.0),
      load('A', '/tmp/a.wav'),
      load('B', 'b.wav'),
      start(),
      stop(),
      statusRequest(),
    ]) {
      expect(validate(message), JSON.stringify(validate.errors)).toBe(true)
    }
  })

  it('never carry k outside [0, 1]', () => {
    for (const k of [-5, -0.001, 0.3, 1.0001, 99]) {
      const { k: sent } = setK(k)
      expect(sent).toBeGreaterThanOrEqual(0)
      expect(sent).toBeLessThanOrEqual(1)
    }
  })
})

describe('parseStatus', () => {
  it('accepts a well-formed status frame', () => {
    const frame = parseStatus('{"kind":"status","k":0.4,"rms":0.12,"hop":77}')
    expect(frame).toEqual({ kind: 'status', k: 0.4, rms: 0.12, hop: 77 })
  })

  it('and that frame round-trips through the schema', () => {
    const frame = parseStatus('{"kind":"status","k":0.4,"rms":0.12,"hop":77}')
    expect(validate(frame)).toBe(true)
  })

  it.each([
    'not json',
    '42',
    '{"kind":"status"}',
    '{"kind":"status","k":"high","rms":0,"hop":0}',
    '{"kind":"set_k","k":0.4}',
  ])('rejects %s', (raw) => {
    expect(parseStatus(raw)).toBeNull()
  })
})
