#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mdli/schema.hpp"
#include "mdli/values.hpp"

namespace mdli {

// Selector within a description/model: a field name, optionally indexed
// ("lay[0]"). Paths print exactly as in trace logs: "lay[1].object.color".
struct PathSel {
    std::string field;
    int index = -1;
    bool operator==(const PathSel&) const = default;
};
using Path = std::vector<PathSel>;

std::string path_to_string(const Path& p);
Result<Path> path_from_string(const std::string& s);

enum class Tag : uint8_t {
    Unknown,  // hole of a given kind, printed "?"
    Val,      // primitive constant
    Pat,      // constructor application
    Ref,      // reference into the environment, printed "!path"
    Apply,    // function application
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Tag tag;
    KindId kind = 0;
    CtorId ctor = 0;  // Pat
    FuncId fn = 0;    // Apply
    Value val;        // Val
    Path ref;         // Ref
    std::vector<NodePtr> args;  // Pat children (fields then list) / Apply args
    uint64_t hash = 0;

    bool is_ground() const;      // no Unknown/Ref/Apply anywhere
    bool is_model_only() const;  // contains Ref or Apply
    int list_len(const Schema& s) const {
        return int(args.size() - s.ctor(ctor).fields.size());
    }
};

NodePtr make_unknown(KindId kind);
NodePtr make_val(KindId kind, Value v);
NodePtr make_pat(const Schema& s, CtorId ctor, std::vector<NodePtr> args);
NodePtr make_ref(KindId kind, Path p);
NodePtr make_apply(KindId kind, FuncId fn, std::vector<NodePtr> args);

bool node_eq(const Node& a, const Node& b);
inline bool node_eq(const NodePtr& a, const NodePtr& b) {
    return a == b || (a && b && node_eq(*a, *b));
}

// Rebuilds `root` with the node at `path` replaced by `edit(old)`.
// Fails when the path does not exist.
Result<NodePtr> replace_at(const Schema& s, const NodePtr& root, const Path& path,
                           const std::function<NodePtr(const NodePtr&)>& edit);
// Inserts `elem` into the trailing list of the constructor at `path`,
// at list position `pos` (clamped to the list size).
Result<NodePtr> insert_list_elem(const Schema& s, const NodePtr& root, const Path& path,
                                 int pos, const NodePtr& elem);
Result<NodePtr> remove_list_elem(const Schema& s, const NodePtr& root, const Path& path, int pos);

// Human-readable syntax mirroring the trace logs: constructors capitalized,
// unknowns "?", references "!path".
struct NodePrinter {
    const Schema* schema;
    std::function<std::string(const Value&, KindId)> print_value;
    std::function<std::string(FuncId)> func_name;
    std::string operator()(const NodePtr& n) const;
};

// Pair of grid/row models: the unit of learning and prediction.
struct TaskModel {
    NodePtr input;
    NodePtr output;
};

} // namespace mdli
