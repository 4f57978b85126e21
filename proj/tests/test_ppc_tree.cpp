#include <doctest.h>

#include <functional>
#include <map>

#include "lord/ppc_tree.hpp"
#include "support/golden.hpp"
#include "support/oracles.hpp"

using namespace lord;
using namespace testsupport;

namespace {

const PPCNode* find_child(const PPCTree& tree, const PPCNode& node, SelectorId selector) {
  for (std::int32_t child : node.children)
    if (tree.nodes[static_cast<std::size_t>(child)].selector == selector)
      return &tree.nodes[static_cast<std::size_t>(child)];
  return nullptr;
}

PPCTree golden_tree(const Golden& g) {
  PPCTree tree = build_tree(g.dataset);
  assign_pp_codes(tree);
  return tree;
}

}  // namespace

TEST_CASE("golden tree roots and frequencies") {
  Golden g = make_golden();
  PPCTree tree = golden_tree(g);

  const PPCNode& root = tree.root();
  REQUIRE(root.children.size() == 3);
  // Children ascending by selector id: s3, s1, s2.
  CHECK(tree.nodes[static_cast<std::size_t>(root.children[0])].selector == g.s3);
  CHECK(tree.nodes[static_cast<std::size_t>(root.children[1])].selector == g.s1);
  CHECK(tree.nodes[static_cast<std::size_t>(root.children[2])].selector == g.s2);
  CHECK(tree.nodes[static_cast<std::size_t>(root.children[0])].freq == 2);
  CHECK(tree.nodes[static_cast<std::size_t>(root.children[1])].freq == 3);
  CHECK(tree.nodes[static_cast<std::size_t>(root.children[2])].freq == 3);

  Count child_sum = 0;
  for (std::int32_t c : root.children) child_sum += tree.nodes[static_cast<std::size_t>(c)].freq;
  CHECK(child_sum == 8);
}

TEST_CASE("golden PP-codes are pinned") {
  Golden g = make_golden();
  PPCTree tree = golden_tree(g);

  const PPCNode* s3 = find_child(tree, tree.root(), g.s3);
  const PPCNode* s1 = find_child(tree, tree.root(), g.s1);
  const PPCNode* s2 = find_child(tree, tree.root(), g.s2);
  REQUIRE(s3 != nullptr);
  REQUIRE(s1 != nullptr);
  REQUIRE(s2 != nullptr);
  CHECK(s3->pre == 1);
  CHECK(s3->post == 5);
  CHECK(s1->pre == 7);
  CHECK(s1->post == 11);
  CHECK(s2->pre == 13);
  CHECK(s2->post == 18);

  CHECK(tree.root().pre == 0);
  CHECK(tree.root().post == static_cast<std::int32_t>(tree.node_count()) - 1);
}

TEST_CASE("single example forms a chain") {
  std::istringstream in("a,y\nv,c\n");
  LoadOptions options;
  options.class_column = "y";
  RawTable table = load_table(in, options);
  EncodedDataset dataset = encode_examples(table, build_selector_dictionary(table));
  PPCTree tree = build_tree(dataset);
  assign_pp_codes(tree);

  REQUIRE(tree.node_count() == 3);  // root -> class -> predictive selector
  CHECK(tree.root().pre == 0);
  CHECK(tree.root().post == 2);
  const PPCNode& child = tree.nodes[static_cast<std::size_t>(tree.root().children[0])];
  CHECK(child.pre == 1);
  CHECK(child.post == 1);
  CHECK(child.freq == 1);
  const PPCNode& grandchild = tree.nodes[static_cast<std::size_t>(child.children[0])];
  CHECK(grandchild.pre == 2);
  CHECK(grandchild.post == 0);
  CHECK(grandchild.freq == 1);
}

TEST_CASE("identical examples share their full path") {
  std::istringstream in("a,y\nv,c\nv,c\n");
  LoadOptions options;
  options.class_column = "y";
  RawTable table = load_table(in, options);
  EncodedDataset dataset = encode_examples(table, build_selector_dictionary(table));
  PPCTree tree = build_tree(dataset);
  REQUIRE(tree.node_count() == 3);
  for (std::size_t i = 1; i < tree.node_count(); ++i) CHECK(tree.nodes[i].freq == 2);
}

TEST_CASE("Property 1 agrees with parent links on random trees") {
  SplitMix64 rng(99);
  for (int round = 0; round < 25; ++round) {
    RawTable table = random_table(rng);
    if (table.row_count() == 0) continue;
    EncodedDataset dataset = encode_examples(table, build_selector_dictionary(table));
    PPCTree tree = build_tree(dataset);
    assign_pp_codes(tree);

    // Ancestor sets from parent links.
    const std::size_t n = tree.node_count();
    for (std::size_t a = 1; a < n; ++a) {
      std::vector<char> is_ancestor(n, 0);
      for (std::int32_t p = tree.nodes[a].parent; p >= 0; p = tree.nodes[static_cast<std::size_t>(p)].parent)
        is_ancestor[static_cast<std::size_t>(p)] = 1;
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const bool by_codes =
            tree.nodes[b].pre < tree.nodes[a].pre && tree.nodes[b].post > tree.nodes[a].post;
        CHECK(by_codes == static_cast<bool>(is_ancestor[b]));
      }
    }
  }
}

TEST_CASE("node frequencies equal replayed path counts") {
  SplitMix64 rng(7);
  for (int round = 0; round < 25; ++round) {
    RawTable table = random_table(rng);
    if (table.row_count() == 0) continue;
    EncodedDataset dataset = encode_examples(table, build_selector_dictionary(table));
    PPCTree tree = build_tree(dataset);

    // Replay every insertion, counting visits per node by walking the tree.
    std::map<const PPCNode*, Count> visits;
    for (const EncodedExample& e : dataset.examples) {
      std::vector<SelectorId> sequence(e.body);
      sequence.push_back(e.class_selector);
      const PPCNode* current = &tree.root();
      for (auto it = sequence.rbegin(); it != sequence.rend(); ++it) {
        const PPCNode* child = find_child(tree, *current, *it);
        REQUIRE(child != nullptr);
        visits[child]++;
        current = child;
      }
    }
    for (std::size_t i = 1; i < tree.node_count(); ++i)
      CHECK(tree.nodes[i].freq == visits[&tree.nodes[i]]);

    // Children strictly ascending by selector id everywhere.
    for (const PPCNode& node : tree.nodes)
      for (std::size_t c = 1; c < node.children.size(); ++c)
        CHECK(tree.nodes[static_cast<std::size_t>(node.children[c - 1])].selector <
              tree.nodes[static_cast<std::size_t>(node.children[c])].selector);
  }
}
