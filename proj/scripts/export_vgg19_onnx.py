"""Export VGG-19 truncated at relu5_1 to ONNX for the pretrained backend.

The graph has one input ("input", 1x3xHxW, dynamic H/W) and five outputs
named relu1_1 .. relu5_1. A JSON manifest with the input normalization is
written next to the model.

    python scripts/export_vgg19_onnx.py vgg19.onnx
    python scripts/export_vgg19_onnx.py --random-weights vgg19.onnx   # offline
"""

import argparse
import json
import pathlib

import onnx
import torch
import torchvision

# Indices into torchvision's vgg19().features of the ReLUs we expose.
TAPS = {"relu1_1": 1, "relu2_1": 6, "relu3_1": 11, "relu4_1": 20, "relu5_1": 29}


class Truncated(torch.nn.Module):
    def __init__(self, features):
        super().__init__()
        self.features = features[: max(TAPS.values()) + 1]

    def forward(self, x):
        outs = []
        wanted = sorted(TAPS.values())
        for i, layer in enumerate(self.features):
            x = layer(x)
            if i in wanted:
                outs.append(x)
        return tuple(outs)


def fold_initializer_identities(path):
    """Older OpenCV dnn importers reject Identity nodes fed by initializers."""
    model = onnx.load(str(path))
    graph = model.graph
    inits = {t.name: t for t in graph.initializer}
    keep = []
    for node in graph.node:
        if node.op_type == "Identity" and node.input[0] in inits:
            alias = onnx.TensorProto()
            alias.CopyFrom(inits[node.input[0]])
            alias.name = node.output[0]
            graph.initializer.append(alias)
        else:
            keep.append(node)
    del graph.node[:]
    graph.node.extend(keep)
    onnx.checker.check_model(model)
    onnx.save(model, str(path))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("output", type=pathlib.Path)
    ap.add_argument("--random-weights", action="store_true", help="skip the ImageNet weight download")
    ap.add_argument("--opset", type=int, default=11)
    args = ap.parse_args()

    weights = None if args.random_weights else torchvision.models.VGG19_Weights.IMAGENET1K_V1
    vgg = torchvision.models.vgg19(weights=weights)
    for m in vgg.features:
        if isinstance(m, torch.nn.ReLU):
            m.inplace = False
    model = Truncated(vgg.features).eval()

    names = list(TAPS)
    dummy = torch.rand(1, 3, 256, 256)
    axes = {"input": {2: "h", 3: "w"}, **{n: {2: f"h{i}", 3: f"w{i}"} for i, n in enumerate(names)}}
    torch.onnx.export(model, dummy, str(args.output), input_names=["input"], output_names=names,
                      dynamic_axes=axes, opset_version=args.opset, dynamo=False)
    fold_initializer_identities(args.output)

    manifest = {
        "outputs": names,
        "mean": [0.485, 0.456, 0.406],
        "std": [0.229, 0.224, 0.225],
        "input_range": "unit",
        "pretrained": not args.random_weights,
    }
    args.output.with_suffix(args.output.suffix + ".json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
