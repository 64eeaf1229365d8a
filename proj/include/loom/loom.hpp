#pragma once

#include "loom/allocators.hpp"
#include "loom/experiment.hpp"
#include "loom/generator.hpp"
#include "loom/graph.hpp"
#include "loom/isomorphism.hpp"
#include "loom/matcher.hpp"
#include "loom/ordering.hpp"
#include "loom/pipeline.hpp"
#include "loom/rng.hpp"
#include "loom/signature.hpp"
#include "loom/stream_io.hpp"
#include "loom/trie.hpp"
#include "loom/workload.hpp"
