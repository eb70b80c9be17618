#pragma once

#include <map>

namespace infharm {

// Designated neighbors of an interior vertex: where the advancing player
// moves (max_to) and where the retreating player moves (min_to). The two
// coincide only at vertices with a single neighbor.
struct DirectionChoice {
    int max_to;
    int min_to;
    friend bool operator==(const DirectionChoice&, const DirectionChoice&) = default;
    friend auto operator<=>(const DirectionChoice&, const DirectionChoice&) = default;
};

// One choice per interior vertex.
using Strategy = std::map<int, DirectionChoice>;

}  // namespace infharm
