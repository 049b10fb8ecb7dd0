#include <gtest/gtest.h>

#include "mmtsp/instance_io.hpp"
#include "oracles.hpp"

using namespace mmtsp;

TEST(InstanceIo, ReadsDocument) {
    const auto inst = read_instance_string(R"({
        "targets": [[1, 2], [3.5, 4], [0, 0]],
        "vehicles": [{"speed": 1, "depot": [0, 0]}, {"speed": 1.5, "depot": [10, 10]}],
        "required": {"2": [2]}
    })");
    EXPECT_EQ(inst.num_targets(), 3u);
    EXPECT_EQ(inst.num_vehicles(), 2u);
    EXPECT_EQ(inst.target(1), (Point{3.5, 4}));
    EXPECT_EQ(inst.vehicle(1).speed, 1.5);
    EXPECT_EQ(inst.owner(2), 1);
    EXPECT_TRUE(inst.required(0).empty());
}

TEST(InstanceIo, RequiredIsOptional) {
    const auto inst = read_instance_string(R"({"targets": [[1, 2]], "vehicles": [{"speed": 2, "depot": [0, 0]}]})");
    EXPECT_EQ(inst.free_targets().size(), 1u);
}

TEST(InstanceIo, RejectsMalformed) {
    EXPECT_THROW(read_instance_string("{not json"), InvalidInput);
    EXPECT_THROW(read_instance_string(R"({"targets": [[1]], "vehicles": [{"speed": 1, "depot": [0, 0]}]})"), InvalidInput);
    EXPECT_THROW(read_instance_string(R"({"targets": [[1, 1]], "vehicles": [{"speed": -1, "depot": [0, 0]}]})"),
                 InvalidInput);
    EXPECT_THROW(read_instance_string(R"({"targets": [[1, 1]], "vehicles": [{"speed": 1, "depot": [0, 0]}],
                                          "required": {"0": [0]}})"),
                 InvalidInput);
    EXPECT_THROW(read_instance_string(R"({"targets": [[1, 1]], "vehicles": [{"speed": 1, "depot": [0, 0]}],
                                          "required": {"x1": [0]}})"),
                 InvalidInput);
    EXPECT_THROW(read_instance_string(R"({"vehicles": [{"speed": 1, "depot": [0, 0]}]})"), InvalidInput);
    EXPECT_THROW(read_instance("/nonexistent/dir/instance.json"), IoError);
}

// Serialization is canonical: writing a parsed document reproduces it byte
// for byte, and the parsed instance is identical to the original.
TEST(InstanceIo, RoundTripStable) {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const auto inst = oracle::random_instance(rng, 1 + uniform_index(rng, 20), {1.0, 1.5, 2.0}, uniform_index(rng, 6));
        const std::string text = write_instance_string(inst);
        const auto back = read_instance_string(text);
        EXPECT_EQ(write_instance_string(back), text);
        for (std::size_t t = 0; t < inst.num_targets(); ++t) EXPECT_EQ(back.targets()[t], inst.targets()[t]);
        EXPECT_EQ(back.required_sets(), inst.required_sets());
    }
}
