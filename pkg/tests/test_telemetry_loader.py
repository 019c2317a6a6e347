import pytest

from telemetry.errors import EmptyDatasetError, MissingColumnError, MissingFileError, NonNumericCellError
from telemetry.loader import load_csv, write_csv
from telemetry.models import CSV_COLUMNS, ScalingSpec, TelemetrySample

HEADER = ",".join(CSV_COLUMNS)


def write(tmp_path, text, name="telemetry.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_csv_keeps_file_order(tmp_path):
    path = write(tmp_path, f"{HEADER}\n1000,500,2000,40,0.01\n2000,600,3000,80.5,0.02\n")

    samples = load_csv(path)

    assert len(samples) == 2
    assert samples[0] == TelemetrySample(1000.0, 500.0, 2000.0, 40.0, 0.01)
    assert samples[1].utilization == 80.5
    assert samples.rejected_rows == ()
    assert samples.provenance == str(path)


def test_load_csv_skips_invalid_rows_and_records_them(tmp_path):
    """
    Negative frame size (row 2) and non-positive delay (row 4) break sample
    invariants: they are skipped, not fatal.
    """
    path = write(
        tmp_path,
        f"{HEADER}\n1000,500,2000,40,0.01\n-1,500,2000,40,0.01\n1000,500,2000,130,0.03\n1000,500,2000,40,0\n",
    )

    samples = load_csv(path)

    assert len(samples) == 2
    assert samples.rejected_rows == (2, 4)
    # Utilization above 100 is legal.
    assert samples[1].utilization == 130.0


def test_load_csv_column_mapping(tmp_path):
    path = write(tmp_path, "frame,Arrival_rate_Cl,Arrival_rate_All,Utilization,Delay\n1000,500,2000,40,0.01\n")

    samples = load_csv(path, schema={"Client_Frame_Size": "frame"})

    assert samples[0].client_frame_size == 1000.0


def test_load_csv_errors(tmp_path):
    with pytest.raises(MissingFileError):
        load_csv(tmp_path / "nope.csv")

    with pytest.raises(MissingColumnError, match="Delay"):
        load_csv(write(tmp_path, "Client_Frame_Size,Arrival_rate_Cl,Arrival_rate_All,Utilization\n1,2,3,4\n"))

    with pytest.raises(NonNumericCellError, match="row 2, column Utilization"):
        load_csv(write(tmp_path, f"{HEADER}\n1,2,3,4,0.1\n1,2,3,busy,0.1\n"))

    with pytest.raises(NonNumericCellError):
        load_csv(write(tmp_path, f"{HEADER}\n1,2,3,,0.1\n"))

    with pytest.raises(EmptyDatasetError):
        load_csv(write(tmp_path, f"{HEADER}\n"))

    with pytest.raises(EmptyDatasetError):
        load_csv(write(tmp_path, f"{HEADER}\n1,2,3,4,-0.1\n"))


def test_write_csv_reloads_generator_output_exactly(tmp_path, saturating_dataset):
    samples, _ = saturating_dataset
    path = write_csv(samples, tmp_path / "out" / "telemetry.csv")

    reloaded = load_csv(path)

    assert reloaded.samples == samples.samples


def test_scaling_spec_rejects_bad_divisors():
    with pytest.raises(ValueError):
        ScalingSpec(divisors={"Utilization": 0.0})

    spec = ScalingSpec()
    assert spec.apply("Client_Frame_Size", 2e6) == pytest.approx(2.0)
    assert ScalingSpec.from_dict(spec.to_dict()) == spec
