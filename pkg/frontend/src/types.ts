/** API wire types, validated with zod so contract drift fails loudly. */

import { z } from "zod";

const point = z.tuple([z.number(), z.number()]);

export const ModelSchema = z.object({
  entities: z.array(
    z.object({ id: z.string(), label: z.string(), prior_presence: z.number() }),
  ),
  actions: z.array(
    z.object({
      id: z.string(),
      label: z.string(),
      performed_by: z.string(),
      acts_on: z.string(),
      prob_given_present: z.number(),
      creates_signal: z.string(),
    }),
  ),
  signals: z.array(
    z.object({
      id: z.string(),
      label: z.string(),
      signal_class: z.string(),
      source_level: z.number(),
    }),
  ),
  signal_classes: z.array(
    z.object({ id: z.string(), label: z.string(), broader: z.string().nullable() }),
  ),
  sensors: z.array(
    z.object({
      id: z.string(),
      label: z.string(),
      position: point,
      classifier: z.string(),
      detects_classes: z.array(z.string()),
    }),
  ),
  rooms: z.array(
    z.object({
      id: z.string(),
      label: z.string(),
      centroid: point,
      contains_assets: z.array(z.string()),
    }),
  ),
  barriers: z.array(
    z.object({ id: z.string(), segment: z.tuple([point, point]), attenuation_db: z.number() }),
  ),
  bn_node_count: z.number().int(),
  enumeration_guard: z.number().int(),
});
export type ModelSummary = z.infer<typeof ModelSchema>;

export const InferSchema = z.object({
  posteriors: z.record(z.number()),
  nodes: z.array(
    z.object({
      label: z.string(),
      key: z.object({ kind: z.string(), parts: z.array(z.string()) }),
      p_true: z.number(),
    }),
  ),
  method: z.string(),
  n_samples: z.number().int(),
  effective_sample_size: z.number().nullable(),
  seed: z.number().int(),
});
export type InferResponse = z.infer<typeof InferSchema>;

export const ObservationSchema = z.object({
  sensor: z.string(),
  class: z.string(),
  result: z.boolean(),
  time: z.string().optional(),
});
export type Observation = z.infer<typeof ObservationSchema>;

export const SimulateSchema = z.object({
  seed: z.number().int(),
  scenario: z.record(z.boolean()),
  observations: z.array(ObservationSchema),
});
export type SimulateResponse = z.infer<typeof SimulateSchema>;

export interface InferRequest {
  observations: Observation[];
  samples?: number;
  seed?: number;
  exact?: boolean;
}

export interface SimulateRequest {
  seed: number;
  force?: Record<string, boolean>;
}
