// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Line-delimited metadata records, one JSON object per line:
//
//   {"record":"header","schema":"proxgen-metadata/1","stream_id":..,"scenario":..,
//    "frame_rate":..,"axis_convention":{"forward_column":2,"forward_sign":1},
//    "distractor_texts":[..]}
//   {"record":"frame","index":i,"timestamp":t,
//    "device_pose":{"rotation":[[..],[..],[..]],"translation":[x,y,z]},
//    "camera_offset":{...same...},
//    "gaze":{"dir":[x,y,z],"depth":d|null}|null,
//    "skeleton":{"<joint>":[x,y,z],...}|null}
//   {"record":"object","object_id":..,"name":..,
//    "boxes":[[minx,miny,minz,maxx,maxy,maxz], ...one per frame] | "box":[...]}
//   {"record":"object","object_id":..,"name":..,
//    "interactions":[{"start":..,"end":..,"hands":["left","right"]}]}
//   {"record":"keystep","id":..,"text":..,"start":..,"end":..,"goal":..,
//    "hands":[..],"order_independent_with":[..]}
//
// The header comes first and frames appear in index order. The formal schema
// is schema/metadata.schema.json.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "proxgen/scene.hpp"

namespace proxgen {

inline constexpr std::string_view kMetadataSchema = "proxgen-metadata/1";

// Edge length of the cube placed at the mean hand position for objects that
// come without boxes.
inline constexpr double kHandProxyBoxSize = 0.1;

std::string serialize_stream(const SceneStream& stream);
void write_stream(const std::string& path, const SceneStream& stream);

// Throws SchemaViolation (naming the line / frame) or NonMonotoneTimestamps.
SceneStream parse_stream(std::string_view text);
SceneStream ingest(const std::string& path);

// 64-bit FNV-1a of serialize_stream, as 16 hex digits.
std::string stream_digest(const SceneStream& stream);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace proxgen
