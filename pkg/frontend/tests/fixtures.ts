import { ActivityDoc, ScenarioDoc } from "../src/api.js";

export function tinyScenario(): ScenarioDoc {
  return {
    version: 1,
    id: "s0",
    meta: { name: "tiny", split: "seen" },
    nodes: [
      { id: "a", xyz: [0, 0, 0], region: "kitchen" },
      { id: "b", xyz: [4, 0, 0], region: "kitchen" },
      { id: "c", xyz: [4, 4, 3], region: "bedroom" },
    ],
    edges: [
      ["a", "b"],
      ["b", "c"],
    ],
    humans: [
      {
        id: "h00",
        activity: { id: "act-00-0", description: "washing dishes", region: "kitchen" },
        anchor: "a",
        waypoints: [
          [0, 0, 0],
          [4, 0, 0],
        ],
        footprint_radius: 0.3,
      },
    ],
  };
}

export const catalog: ActivityDoc[] = [
  { id: "act-00-0", description: "washing dishes", region: "kitchen" },
  { id: "act-00-1", description: "chopping vegetables", region: "kitchen" },
  { id: "act-01-0", description: "folding laundry", region: "bedroom" },
];
