import pytest

from samplevideos import write_flat_video, write_oval_video


@pytest.fixture
def flat_video(tmp_path):
    return write_flat_video(tmp_path / "flat.mp4")


@pytest.fixture
def oval_video(tmp_path):
    return write_oval_video(tmp_path / "oval.mp4")
