"""Desk-scale embodied-benchmark toolkit.

Subpackages: scene (annotated scenes and the derived scene graph), wkm (the
world knowledge interfaces and grounding), taskgen (occupancy maps, path and
episode sampling, instruction generation), npc (dialogue sessions and QA),
sim (the 2D episode simulator), agents (baseline policies), metrics
(SR/PL/SPL/RT/ECR/SCR), service (HTTP API), cli.
"""

__version__ = "0.1.0"
