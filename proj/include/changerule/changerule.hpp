#pragma once

#include "changerule/assignment.hpp"
#include "changerule/detector.hpp"
#include "changerule/distance.hpp"
#include "changerule/exas.hpp"
#include "changerule/frontend/aug_builder.hpp"
#include "changerule/frontend/parser.hpp"
#include "changerule/frontend/source_root.hpp"
#include "changerule/graph.hpp"
#include "changerule/graph_io.hpp"
#include "changerule/harness/buckets.hpp"
#include "changerule/harness/evaluate.hpp"
#include "changerule/harness/manifest.hpp"
#include "changerule/harness/vcs.hpp"
#include "changerule/rule_inference.hpp"
#include "changerule/rule_io.hpp"
