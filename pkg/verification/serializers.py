# verification/serializers.py

import math

from rest_framework import serializers

from kernel.weights import WeightVariant
from params.models import Regime, RegimeError, SpinConvention, params_from_tau, regime_ii_from_angle
from params.serializers import ComplexField

from .utils import (
    get_contour_nodes,
    get_default_x_extent,
    get_default_y_padding,
    get_quadrature_resolution,
)

COMMANDS = (
    'params',
    'symbolic-check',
    'gamma-eval',
    'gamma-check',
    'zeros',
    'phi-eval',
    'kernel-check',
    'herm-check',
    'gram',
    'continuous-check',
    'suite',
)
# tabulations that only exist as CSV grids
CSV_COMMANDS = ('gamma-eval', 'phi-eval')
# checks whose JSON report can be swapped for the CSV grid of their residuals
GRID_COMMANDS = ('kernel-check',)
# imag and real sample t; y samples the measure argument t = -2iy
GRID_KINDS = ('imag', 'real', 'y')


def parse_grid(text):
    """'kind:lo:hi:count' -> (kind, lo, hi, count), bounds in units of mu"""
    parts = text.split(':')
    if len(parts) != 4 or parts[0] not in GRID_KINDS:
        raise ValueError(f"Grid must look like imag:lo:hi:count, real:lo:hi:count or y:lo:hi:count, got {text!r}")
    lo, hi = float(parts[1]), float(parts[2])
    count = int(parts[3])
    if count < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ValueError(f"Grid needs finite bounds lo <= hi and a positive count, got {text!r}")
    return parts[0], lo, hi, count


class RunConfigSerializer(serializers.Serializer):
    """Validates one `verify` invocation and fills numerical defaults from settings"""

    command = serializers.ChoiceField(choices=COMMANDS)
    tau = ComplexField(required=False, allow_null=True, default=None)
    tau_angle = serializers.FloatField(required=False, allow_null=True, default=None)
    regime = serializers.ChoiceField(choices=[r.value for r in Regime], required=False, allow_null=True, default=None)
    n = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    spin_a = ComplexField(required=False, allow_null=True, default=None)
    convention = serializers.ChoiceField(choices=[c.value for c in SpinConvention], default=SpinConvention.SEC3.value)
    weight = serializers.ChoiceField(choices=[w.value for w in WeightVariant], required=False, allow_null=True, default=None)
    domain = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    X = serializers.FloatField(min_value=0.1, required=False, allow_null=True, default=None)
    ypad = serializers.FloatField(min_value=0.01, required=False, allow_null=True, default=None)
    nx = serializers.IntegerField(min_value=8, required=False, allow_null=True, default=None)
    ny = serializers.IntegerField(min_value=8, required=False, allow_null=True, default=None)
    nodes = serializers.IntegerField(min_value=16, required=False, allow_null=True, default=None)
    tol = serializers.FloatField(min_value=0.0, required=False, allow_null=True, default=None)
    out = serializers.CharField(required=False, allow_null=True, allow_blank=False, default=None)
    format = serializers.ChoiceField(choices=('json', 'csv'), required=False, allow_null=True, default=None)
    seed = serializers.IntegerField(min_value=0, default=0)
    level = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    grid = serializers.CharField(required=False, allow_null=True, default=None)
    basis_size = serializers.IntegerField(min_value=1, max_value=32, default=8)

    def validate_grid(self, value):
        if value is None:
            return value
        try:
            parse_grid(value)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return value

    def validate(self, attrs):
        command = attrs['command']

        if attrs['tau'] is not None and attrs['tau_angle'] is not None:
            raise serializers.ValidationError("Give either --tau or --tau-angle, not both")
        if attrs['spin_a'] is not None and attrs['n'] is not None:
            raise serializers.ValidationError("Give either --n or --spin-a, not both")

        if attrs['tau_angle'] is not None:
            if attrs['regime'] not in (None, Regime.II.value):
                raise serializers.ValidationError("--tau-angle describes a Regime II tau")
            attrs['regime'] = Regime.II.value
        if attrs['regime'] is None:
            attrs['regime'] = Regime.I.value if command == 'continuous-check' else Regime.II.value
        if attrs['tau'] is None and attrs['tau_angle'] is None:
            if attrs['regime'] == Regime.I.value:
                attrs['tau'] = complex(4.0)
            else:
                attrs['tau_angle'] = 60.0
        try:
            if attrs['tau_angle'] is not None:
                params = regime_ii_from_angle(attrs['tau_angle'])
                attrs['tau'] = params.tau
            else:
                params = params_from_tau(attrs['tau'], attrs['regime'])
        except RegimeError as exc:
            raise serializers.ValidationError(str(exc))
        attrs['params'] = params

        if attrs['weight'] is None:
            attrs['weight'] = WeightVariant.GAMMA.value if attrs['spin_a'] is not None else WeightVariant.PRODUCT.value
        if attrs['weight'] == WeightVariant.PRODUCT.value and attrs['spin_a'] is not None:
            raise serializers.ValidationError("The product weight needs a discrete spin --n")
        if attrs['n'] is None and attrs['spin_a'] is None:
            attrs['n'] = 3 if command in ('herm-check', 'gram') else 2

        if command in ('herm-check', 'gram'):
            if attrs['n'] is None:
                raise serializers.ValidationError(f"{command} integrates over a region of the discrete-series decomposition; give --n")
            if attrs['domain'] is None:
                attrs['domain'] = (attrs['n'] + 1) // 2
            if attrs['domain'] > attrs['n']:
                raise serializers.ValidationError(f"--domain must lie in 1..{attrs['n']}")

        nx, ny = get_quadrature_resolution()
        attrs['X'] = attrs['X'] if attrs['X'] is not None else get_default_x_extent()
        attrs['ypad'] = attrs['ypad'] if attrs['ypad'] is not None else get_default_y_padding()
        attrs['nx'] = attrs['nx'] or nx
        attrs['ny'] = attrs['ny'] or ny
        attrs['nodes'] = attrs['nodes'] or get_contour_nodes()
        if attrs['level'] is None:
            attrs['level'] = attrs['n'] or 1
        if attrs['format'] is None:
            attrs['format'] = 'csv' if command in CSV_COMMANDS else 'json'
        if attrs['format'] == 'json' and command in CSV_COMMANDS:
            raise serializers.ValidationError(f"{command} tabulates a grid and only writes CSV")
        if attrs['format'] == 'csv' and command not in CSV_COMMANDS + GRID_COMMANDS:
            raise serializers.ValidationError(
                f"{command} writes a JSON report; CSV is for {', '.join(CSV_COMMANDS + GRID_COMMANDS)}"
            )
        if attrs['grid'] is not None and command == 'gamma-eval' and parse_grid(attrs['grid'])[0] == 'y':
            raise serializers.ValidationError("A y grid samples the weight profile; gamma-eval takes imag or real")
        return attrs


def resolved_config(attrs):
    """The validated config as plain JSON values, embedded in every report"""
    payload = {}
    for key, value in attrs.items():
        if key == 'params':
            continue
        if isinstance(value, complex):
            value = [value.real, value.imag]
        payload[key] = value
    return payload


class ResidualSerializer(serializers.Serializer):
    """One named residual with its tolerance verdict"""

    name = serializers.CharField()
    residual = serializers.FloatField()
    tolerance = serializers.FloatField(allow_null=True)
    passed = serializers.BooleanField()


class ReportSerializer(serializers.Serializer):
    """Top-level JSON report of a check"""

    check = serializers.CharField()
    config = serializers.DictField()
    params = serializers.DictField(required=False)
    domain = serializers.DictField(required=False, allow_null=True)
    residuals = ResidualSerializer(many=True, required=False)
    details = serializers.DictField(required=False)
    converged = serializers.BooleanField()
