#pragma once

#include <memory>

#include "repaint/backend.hpp"
#include "repaint/mock_world.hpp"

namespace repaint {

// In-process deterministic backends over a shared MockWorld. The MLLM
// dispatches on the "Task:" marker line our prompt templates carry; its
// side channel into the reference token set is the attached scene bytes.
class MockMllm : public MllmBackend {
public:
    explicit MockMllm(std::shared_ptr<const MockWorld> world) : world_(std::move(world)) {}

    std::string id() const override { return "mock-mllm"; }
    std::string query(const MllmRequest& request) override;

private:
    std::shared_ptr<const MockWorld> world_;
};

class MockT2i : public T2iBackend {
public:
    explicit MockT2i(std::shared_ptr<const MockWorld> world) : world_(std::move(world)) {}

    std::string id() const override { return "mock-t2i"; }
    std::string generate(const T2iRequest& request) override;

private:
    std::shared_ptr<const MockWorld> world_;
};

class MockEmbed : public EmbedBackend {
public:
    explicit MockEmbed(std::shared_ptr<const MockWorld> world) : world_(std::move(world)) {}

    std::string id() const override { return "mock-embed"; }
    std::string embed(const EmbedRequest& request) override;
    Capabilities capabilities() override;

private:
    std::shared_ptr<const MockWorld> world_;
};

// Shared helpers for marker-line parsing; also used by the wire-protocol test
// server, which bridges HTTP requests onto the same world.
std::string marker_value(const std::string& prompt, const std::string& marker);
std::string mock_mllm_answer(const MockWorld& world, const std::vector<std::string>& image_bytes,
                             const std::string& prompt);

} // namespace repaint
