// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "partyline/corpus.hpp"
#include "partyline/csv.hpp"
#include "partyline/distance_matrix.hpp"
#include "partyline/distances.hpp"
#include "partyline/embeddings.hpp"
#include "partyline/error.hpp"
#include "partyline/experiments.hpp"
#include "partyline/groundtruth.hpp"
#include "partyline/hashtag.hpp"
#include "partyline/hashtag_index.hpp"
#include "partyline/mantel.hpp"
#include "partyline/pairgen.hpp"
#include "partyline/parallel.hpp"
#include "partyline/rng.hpp"
#include "partyline/synthetic.hpp"
#include "partyline/timestamp.hpp"
