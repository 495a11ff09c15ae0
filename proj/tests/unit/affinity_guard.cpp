#include "support.hpp"

// Every down-fragment step the checker sees in this process must not grow the
// structure; a violation anywhere fails the run.
namespace {

class AffinityGuard : public ::testing::Environment {
 public:
  void TearDown() override {
    EXPECT_EQ(seqren::stats::affinity_violations.load(), 0)
        << "down-fragment steps that increased size: " << seqren::stats::affinity_violations.load();
  }
};

const auto* const guard = ::testing::AddGlobalTestEnvironment(new AffinityGuard);

}  // namespace
